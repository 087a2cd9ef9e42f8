//! Centralizers of the stabilizing torus and the two closed-orbit tests.

use atlas_algebra::field::{rat, Rat};
use atlas_algebra::matrix::kernel;
use atlas_algebra::{lp, Field, Matrix, PrimeField, RationalField};
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::forms::{lie_stabilizer_dim, QuinticForm};
use crate::golden::{self, TestKind};
use crate::lattice::{halfspace, Relation, WeightVector, ETA, NVARS};
use crate::normal_forms::{NormalForm, NormalFormError};
use crate::seeds;

#[derive(Debug, thiserror::Error)]
pub enum ClosedOrbitError {
    #[error("weight vector is zero")]
    ZeroWeight,
    #[error("weight {0:?} does not sum to zero")]
    NotBalanced([i64; NVARS]),
    #[error("support leaves the wall of {0:?}")]
    OffWall([i64; NVARS]),
    #[error("weight {0:?} has repeated entries; the convex-hull test needs a toric centralizer")]
    NotToric([i64; NVARS]),
    #[error("form is zero")]
    ZeroForm,
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralizerProfile {
    pub weight_multiset: Vec<i64>,
    pub block_sizes: Vec<usize>,
    pub dim_c: usize,
    pub dim_c_mod_h: usize,
    pub is_toric: bool,
}

pub fn centralizer_profile(r: &WeightVector) -> Result<CentralizerProfile, ClosedOrbitError> {
    if r.is_zero() {
        return Err(ClosedOrbitError::ZeroWeight);
    }
    if r.sum() != 0 {
        return Err(ClosedOrbitError::NotBalanced(r.0));
    }
    let mut w = r.0.to_vec();
    w.sort_unstable_by(|a, b| b.cmp(a));
    let mut blocks: Vec<usize> = Vec::new();
    for (i, x) in w.iter().enumerate() {
        if i > 0 && w[i - 1] == *x {
            *blocks.last_mut().unwrap() += 1;
        } else {
            blocks.push(1);
        }
    }
    let sq: usize = blocks.iter().map(|n| n * n).sum();
    Ok(CentralizerProfile {
        is_toric: blocks.iter().all(|&n| n == 1),
        weight_multiset: w,
        block_sizes: blocks,
        dim_c: sq - 1,
        dim_c_mod_h: sq - 2,
    })
}

/// Span of the monomials fixed by the torus `λ_r`.
pub fn fixed_subspace(r: &WeightVector) -> crate::lattice::MonomialSet {
    halfspace(r, Relation::Eq)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    ConvexHull,
    CfCone,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// Strictly positive `c_j` with `Σ c_j (u_j - η) = 0`, in support order.
    Coefficients(Vec<Rat>),
    /// Basis of the admissible-weight cone, which is a linear subspace.
    Lineality(Vec<Vec<Rat>>),
    /// A cone direction on which some support exponent is positive.
    UnboundedDirection(Vec<Rat>),
    None,
}

#[derive(Clone, Debug)]
pub struct ClosedOrbitCertificate {
    pub kind: CertificateKind,
    pub support: Vec<[u8; NVARS]>,
    pub witness: Witness,
    pub verdict: bool,
}

impl ClosedOrbitCertificate {
    /// Re-checks the witness against the recorded support.
    pub fn recheck(&self) -> bool {
        let pts: Vec<Vec<i64>> = self
            .support
            .iter()
            .map(|u| u.iter().map(|&x| x as i64).collect())
            .collect();
        match (&self.witness, self.verdict) {
            (Witness::Coefficients(c), true) => {
                c.len() == pts.len()
                    && c.iter().all(|x| x.is_positive())
                    && (0..NVARS).all(|i| {
                        pts.iter()
                            .zip(c)
                            .fold(Rat::zero(), |acc, (p, x)| acc + x * rat(p[i] - 1))
                            .is_zero()
                    })
            }
            (Witness::Lineality(basis), true) => {
                let in_cone = |w: &Vec<Rat>| {
                    w.iter().fold(Rat::zero(), |a, x| a + x).is_zero()
                        && pts.iter().all(|p| dot(p, w).is_zero())
                };
                // the cone equals the span iff nothing outside it is admissible
                basis.iter().all(in_cone) && {
                    let a: Vec<Vec<i64>> = pts.clone();
                    pts.iter().all(|u| lp::cone_max_is_zero(&a, u))
                        && basis.len() == lineality_basis(&pts).len()
                }
            }
            (Witness::UnboundedDirection(w), false) => {
                w.iter().fold(Rat::zero(), |a, x| a + x).is_zero()
                    && pts.iter().all(|p| !dot(p, w).is_negative())
                    && pts.iter().any(|p| dot(p, w).is_positive())
            }
            (Witness::None, false) => true,
            _ => false,
        }
    }

    pub fn witness_strings(&self) -> serde_json::Value {
        let s = |v: &[Rat]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        match &self.witness {
            Witness::Coefficients(c) => serde_json::json!({ "coefficients": s(c) }),
            Witness::Lineality(b) => {
                serde_json::json!({ "lineality": b.iter().map(|v| s(v)).collect::<Vec<_>>() })
            }
            Witness::UnboundedDirection(w) => serde_json::json!({ "unbounded_direction": s(w) }),
            Witness::None => serde_json::Value::Null,
        }
    }
}

fn dot(p: &[i64], w: &[Rat]) -> Rat {
    p.iter()
        .zip(w)
        .fold(Rat::zero(), |a, (&x, y)| a + rat(x) * y)
}

fn support_rows<F: Field>(phi: &QuinticForm<F>) -> (Vec<[u8; NVARS]>, Vec<Vec<i64>>) {
    let sup: Vec<[u8; NVARS]> = phi.coeffs.keys().map(|u| u.0).collect();
    let pts = sup
        .iter()
        .map(|u| u.iter().map(|&x| x as i64).collect())
        .collect();
    (sup, pts)
}

/// Convex-hull test: is `0` in the relative interior of `{u - η}`?
pub fn convex_hull_closed_test<F: Field>(
    phi: &QuinticForm<F>,
    r: &WeightVector,
) -> Result<ClosedOrbitCertificate, ClosedOrbitError> {
    if phi.is_zero() {
        return Err(ClosedOrbitError::ZeroForm);
    }
    if !centralizer_profile(r)?.is_toric {
        return Err(ClosedOrbitError::NotToric(r.0));
    }
    if !phi.support().is_subset(&fixed_subspace(r)) {
        return Err(ClosedOrbitError::OffWall(r.0));
    }
    let (support, _) = support_rows(phi);
    let shifts: Vec<Vec<i64>> = phi.coeffs.keys().map(|u| u.shift()).collect();
    let coeffs = lp::positive_combination_zero(&shifts).expect("shift vectors share dimension 5");
    Ok(ClosedOrbitCertificate {
        kind: CertificateKind::ConvexHull,
        support,
        verdict: coeffs.is_some(),
        witness: coeffs.map_or(Witness::None, Witness::Coefficients),
    })
}

/// `{w : Σw = 0, u·w = 0 for u in pts}` over `Q`.
fn lineality_basis(pts: &[Vec<i64>]) -> Vec<Vec<Rat>> {
    let mut rows: Vec<Vec<Rat>> = pts
        .iter()
        .map(|p| p.iter().map(|&x| rat(x)).collect())
        .collect();
    rows.push(vec![rat(1); NVARS]);
    kernel(&RationalField, &Matrix::from_rows(rows))
}

/// Diagonal Casimiro–Florentino test: the cone
/// `{w : Σw = 0, w·u ≥ 0 for u in Supp φ}` must be a linear subspace.
pub fn cf_cone_test<F: Field>(
    phi: &QuinticForm<F>,
) -> Result<ClosedOrbitCertificate, ClosedOrbitError> {
    if phi.is_zero() {
        return Err(ClosedOrbitError::ZeroForm);
    }
    let (support, pts) = support_rows(phi);
    for u in &pts {
        if lp::cone_max_is_zero(&pts, u) {
            continue;
        }
        if let Some(w) = lp::cone_direction(&pts, u) {
            return Ok(ClosedOrbitCertificate {
                kind: CertificateKind::CfCone,
                support,
                witness: Witness::UnboundedDirection(w),
                verdict: false,
            });
        }
    }
    Ok(ClosedOrbitCertificate {
        kind: CertificateKind::CfCone,
        witness: Witness::Lineality(lineality_basis(&pts)),
        support,
        verdict: true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DimensionCheck {
    pub wall_size: usize,
    pub dim_p: usize,
    pub dim_c_mod_h: usize,
    pub dim_phi: u32,
    /// `dim P(W^H) - dim C/H`.
    pub predicted: i64,
    pub holds: bool,
    /// Whether the identity is asserted for this state.
    pub asserted: bool,
}

#[derive(Clone, Debug)]
pub struct NormalFormReport {
    pub k: usize,
    pub test: TestKind,
    pub support_in_wall: bool,
    pub certificate: ClosedOrbitCertificate,
    pub profile: CentralizerProfile,
    pub dimension: DimensionCheck,
    pub lie_stabilizer_dim: usize,
}

impl NormalFormReport {
    /// Names of failing sub-checks; empty when the state is certified.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.support_in_wall {
            out.push("support");
        }
        if !self.certificate.verdict {
            out.push("closed-orbit test");
        }
        if !self.certificate.recheck() {
            out.push("witness");
        }
        if self.dimension.asserted && !self.dimension.holds {
            out.push("dimension identity");
        }
        if self.dimension.asserted && self.lie_stabilizer_dim != 1 {
            out.push("stabilizer");
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "test": self.test,
            "verdict": self.certificate.verdict,
            "support_in_wall": self.support_in_wall,
            "support_size": self.certificate.support.len(),
            "witness": self.certificate.witness_strings(),
            "centralizer": self.profile,
            "dimension": self.dimension,
            "lie_stabilizer_dim": self.lie_stabilizer_dim,
            "failures": self.failures(),
        })
    }
}

/// States whose residual generic stabilizer is recorded as finite.
pub fn asserted_states() -> Vec<usize> {
    golden::filters()
        .stabilizer_rows
        .iter()
        .map(|r| r.k)
        .collect()
}

/// Certifies the normal form of state `k` at a sampled parameter point.
pub fn verify_normal_form(
    k: usize,
    seed: u64,
    field: &PrimeField,
) -> Result<NormalFormReport, ClosedOrbitError> {
    let nf = NormalForm::load(k)?;
    let mut rng = seeds::rng(seed, "closed-orbit", k as u64);
    let inst = nf.instantiate(field, &mut rng)?;
    verify_instance(k, &inst.form)
}

/// The checks of [`verify_normal_form`] on a given instance.
pub fn verify_instance(
    k: usize,
    phi: &QuinticForm<PrimeField>,
) -> Result<NormalFormReport, ClosedOrbitError> {
    let row = golden::states()
        .get(k.wrapping_sub(1))
        .ok_or(NormalFormError::UnknownState(k))?;
    let r = row.weight();
    let profile = centralizer_profile(&r)?;
    let wall = fixed_subspace(&r);
    let support_in_wall = phi.support().is_subset(&wall);
    let certificate = match row.test {
        TestKind::ConvexHull if support_in_wall => convex_hull_closed_test(phi, &r)?,
        TestKind::ConvexHull => ClosedOrbitCertificate {
            kind: CertificateKind::ConvexHull,
            support: phi.coeffs.keys().map(|u| u.0).collect(),
            witness: Witness::None,
            verdict: false,
        },
        TestKind::CfCone => cf_cone_test(phi)?,
    };
    let dim_p = wall.len() - 1;
    let predicted = dim_p as i64 - profile.dim_c_mod_h as i64;
    let dimension = DimensionCheck {
        wall_size: wall.len(),
        dim_p,
        dim_c_mod_h: profile.dim_c_mod_h,
        dim_phi: row.dim_phi,
        predicted,
        holds: predicted == row.dim_phi as i64,
        asserted: asserted_states().contains(&k),
    };
    Ok(NormalFormReport {
        k,
        test: row.test,
        support_in_wall,
        certificate,
        profile,
        dimension,
        lie_stabilizer_dim: lie_stabilizer_dim(phi),
    })
}

/// Every state passes `η`, so `x0 x1 x2 x3 x4` is always on the wall.
pub fn eta_on_every_wall() -> bool {
    golden::states().iter().all(|s| ETA.dot(&s.weight()) == 0)
}
