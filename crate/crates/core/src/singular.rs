//! Singular loci of the normal forms and the isolated quasi-homogeneous types.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use atlas_algebra::field::{rat, Rat};
use atlas_algebra::{buchberger, Field, GroebnerBasis, Mono, Poly, PrimeField, Ring};
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::apolar::DEFAULT_PROTOCOL;
use crate::expr::{parse, Env, ExprError};
use crate::forms::{hessian_rank_at, QuinticForm, SampleField, DEFAULT_BOUND};
use crate::golden;
use crate::lattice::NVARS;
use crate::normal_forms::{NormalForm, NormalFormError};
use crate::seeds;

pub const HF_WINDOW: u32 = 30;
const POINT_CAP: usize = 64;

#[derive(Debug, thiserror::Error)]
pub enum SingularError {
    #[error("weights must be positive")]
    NonPositiveWeight,
    #[error("Milnor product {0} is not an integer")]
    NonIntegralMilnor(Rat),
    #[error("no point found on component {0}")]
    NoPoint(String),
    #[error("Hessian rank did not stabilize on component {0}")]
    NotStable(String),
    #[error("component {0} has no parametrization")]
    NoParametrization(String),
    #[error("unknown state {0}")]
    UnknownState(usize),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct QhType {
    pub label: String,
    pub weights: [u32; 4],
    pub degree: u32,
    pub milnor: u32,
    pub occurrences: Vec<(usize, String)>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ComponentSpec {
    pub label: String,
    pub ideal: Vec<String>,
    /// Variable solved from each generator when sampling points.
    pub solve: Option<Vec<usize>>,
    pub dim: u32,
    pub degree: u64,
    pub group: Option<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct PointSpec {
    pub point: String,
    #[serde(rename = "type")]
    pub kind: String,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct LocusSpec {
    pub k: usize,
    pub components: Vec<ComponentSpec>,
    pub points: Vec<PointSpec>,
}

#[derive(Deserialize)]
struct LociFile {
    points: BTreeMap<String, [u8; NVARS]>,
    isolated_types: Vec<QhType>,
    loci: Vec<LocusSpec>,
}

fn loci_file() -> &'static LociFile {
    static CELL: OnceLock<LociFile> = OnceLock::new();
    CELL.get_or_init(|| {
        serde_json::from_str(include_str!("../data/singular_loci.json"))
            .expect("singular_loci.json")
    })
}

pub fn isolated_types() -> &'static [QhType] {
    &loci_file().isolated_types
}

pub fn isolated_type(label: &str) -> Option<&'static QhType> {
    isolated_types().iter().find(|t| t.label == label)
}

pub fn locus_spec(k: usize) -> Result<&'static LocusSpec, SingularError> {
    loci_file()
        .loci
        .get(k.wrapping_sub(1))
        .ok_or(SingularError::UnknownState(k))
}

/// The coordinate point named `P0` or `Pinf`.
pub fn named_point(name: &str) -> Option<[u8; NVARS]> {
    loci_file().points.get(name).copied()
}

/// `∏ (D - w_i) / w_i`, required to be an integer.
pub fn milnor_number(weights: &[u32], d: u32) -> Result<u64, SingularError> {
    if weights.iter().any(|&w| w == 0) {
        return Err(SingularError::NonPositiveWeight);
    }
    let p = weights.iter().fold(Rat::one(), |acc, &w| {
        acc * Rat::new((d as i64 - w as i64).into(), (w as i64).into())
    });
    if !p.is_integer() {
        return Err(SingularError::NonIntegralMilnor(p));
    }
    p.to_integer()
        .to_u64()
        .ok_or(SingularError::NonIntegralMilnor(p))
}

/// `Σ w_i / D`.
pub fn min_exponent(weights: &[u32], d: u32) -> Result<Rat, SingularError> {
    if weights.iter().any(|&w| w == 0) || d == 0 {
        return Err(SingularError::NonPositiveWeight);
    }
    Ok(Rat::new(
        weights.iter().map(|&w| w as i64).sum::<i64>().into(),
        (d as i64).into(),
    ))
}

/// The ideal of the five partial derivatives.
pub fn jacobian_ideal<F: Field>(f: &QuinticForm<F>) -> GroebnerBasis<F> {
    let ring = f.ring();
    let p = f.to_poly();
    let partials: Vec<Poly<F::Elem>> = (0..NVARS).map(|i| ring.derivative(&p, i)).collect();
    buchberger(&ring, &partials)
}

/// `(∂f) : m^∞`.
pub fn jacobian_scheme<F: Field>(f: &QuinticForm<F>) -> GroebnerBasis<F> {
    jacobian_ideal(f).saturate_irrelevant()
}

fn point_elems<F: Field>(field: &F, p: &[u8; NVARS]) -> Vec<F::Elem> {
    p.iter().map(|&x| field.from_i64(x as i64)).collect()
}

fn vanishes_at<F: Field>(ring: &Ring<F>, gens: &[Poly<F::Elem>], pt: &[F::Elem]) -> bool {
    gens.iter().all(|g| ring.field.is_zero(&ring.eval(g, pt)))
}

/// A component ideal evaluated at the instance's parameters and subforms.
pub fn component_ideal<F: SampleField>(
    spec: &ComponentSpec,
    ring: &Ring<F>,
    env: &Env<F::Elem>,
) -> Result<Vec<Poly<F::Elem>>, SingularError> {
    let mut env = env.clone();
    let mut rng = rand::rngs::mock::StepRng::new(1, 1);
    spec.ideal
        .iter()
        .map(|s| Ok(parse(s)?.eval(ring, &mut env, &mut rng)?))
        .collect()
}

/// A random point of the component: free coordinates are drawn at random and
/// each generator is solved for its designated variable.
pub fn sample_component_point<F: SampleField, R: Rng + ?Sized>(
    spec: &ComponentSpec,
    gens: &[Poly<F::Elem>],
    ring: &Ring<F>,
    rng: &mut R,
) -> Result<Vec<F::Elem>, SingularError> {
    let solve = spec
        .solve
        .as_ref()
        .ok_or_else(|| SingularError::NoParametrization(spec.label.clone()))?;
    let f = &ring.field;
    'draw: for _ in 0..POINT_CAP {
        let mut pt: Vec<F::Elem> = (0..NVARS)
            .map(|_| f.sample_nonzero(rng, DEFAULT_BOUND))
            .collect();
        for (g, &s) in gens.iter().zip(solve) {
            pt[s] = f.zero();
            let b = ring.eval(g, &pt);
            pt[s] = f.one();
            let a = f.sub(&ring.eval(g, &pt), &b);
            if f.is_zero(&a) {
                continue 'draw;
            }
            pt[s] = f.neg(&f.div(&b, &a));
        }
        if vanishes_at(ring, gens, &pt) && pt.iter().any(|x| !f.is_zero(x)) {
            return Ok(pt);
        }
    }
    Err(SingularError::NoPoint(spec.label.clone()))
}

/// Generic Hessian rank of `f` along a component: sampled until
/// `protocol` consecutive points agree.
pub fn component_hessian_rank<F: SampleField, R: Rng + ?Sized>(
    f: &QuinticForm<F>,
    spec: &ComponentSpec,
    env: &Env<F::Elem>,
    protocol: usize,
    rng: &mut R,
) -> Result<usize, SingularError> {
    let ring = f.ring();
    let gens = component_ideal(spec, &ring, env)?;
    let mut last = None;
    let mut run = 0;
    for _ in 0..POINT_CAP {
        let pt = sample_component_point(spec, &gens, &ring, rng)?;
        let r = hessian_rank_at(f, &pt);
        if last == Some(r) {
            run += 1;
        } else {
            last = Some(r);
            run = 1;
        }
        if run >= protocol {
            return Ok(r);
        }
    }
    Err(SingularError::NotStable(spec.label.clone()))
}

/// The dehomogenization at a coordinate point checked against a
/// quasi-homogeneous type: some assignment of the weights to the four local
/// coordinates puts every monomial in weighted degree `≥ D`, and the
/// degree-`D` part has Milnor algebra of dimension `μ`.
#[derive(Clone, Debug, Serialize)]
pub struct LocalTypeCheck {
    pub label: String,
    pub local_vars: [usize; 4],
    pub weights: Option<[u32; 4]>,
    pub milnor: Option<u64>,
    pub expected_milnor: u32,
    pub matches: bool,
}

fn milnor_algebra_dim<F: Field>(ring: &Ring<F>, f: &Poly<F::Elem>) -> Option<u64> {
    let partials: Vec<Poly<F::Elem>> = (0..ring.nvars).map(|i| ring.derivative(f, i)).collect();
    if partials.iter().all(|p| p.is_zero()) {
        return None;
    }
    let gb = buchberger(ring, &partials);
    let leads = gb.lead_monomials();
    // zero-dimensional iff every variable has a pure power among the leads
    let mut socle_bound = 0;
    for i in 0..ring.nvars {
        let a = leads
            .iter()
            .filter(|m| m.exp(i) > 0 && m.degree() == m.exp(i))
            .map(|m| m.exp(i))
            .min()?;
        socle_bound += a - 1;
    }
    let h = gb.hilbert(socle_bound + 1);
    Some(h.hf.iter().sum())
}

fn perms4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                if a != b && b != c && a != c {
                    out.push([a, b, c, 6 - a - b - c]);
                }
            }
        }
    }
    out
}

pub fn local_type_check<F: Field>(
    f: &QuinticForm<F>,
    point: &[u8; NVARS],
    t: &QhType,
) -> LocalTypeCheck {
    let chart = point.iter().position(|&x| x != 0).expect("nonzero point");
    let local: Vec<usize> = (0..NVARS).filter(|&i| i != chart).collect();
    let local_vars = [local[0], local[1], local[2], local[3]];
    let ring4 = Ring::new(f.field.clone(), 4);
    let terms: Vec<([u32; 4], F::Elem)> = f
        .coeffs
        .iter()
        .map(|(u, c)| (local_vars.map(|i| u.0[i] as u32), c.clone()))
        .collect();
    let mut out = LocalTypeCheck {
        label: t.label.clone(),
        local_vars,
        weights: None,
        milnor: None,
        expected_milnor: t.milnor,
        matches: false,
    };
    let mut tried = std::collections::BTreeSet::new();
    for idx in perms4() {
        let w = idx.map(|i| t.weights[i]);
        if !tried.insert(w) {
            continue;
        }
        let wdeg = |e: &[u32; 4]| -> u32 { e.iter().zip(&w).map(|(a, b)| a * b).sum() };
        if terms.iter().any(|(e, _)| wdeg(e) < t.degree) {
            continue;
        }
        let principal = ring4.from_terms(
            terms
                .iter()
                .filter(|(e, _)| wdeg(e) == t.degree)
                .map(|(e, c)| (Mono::from_exps(e), c.clone()))
                .collect(),
        );
        if let Some(mu) = milnor_algebra_dim(&ring4, &principal) {
            out.weights = Some(w);
            out.milnor = Some(mu);
            if mu == t.milnor as u64 {
                out.matches = true;
                return out;
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentCheck {
    pub label: String,
    pub group: Option<String>,
    pub claimed_dim: u32,
    pub claimed_degree: u64,
    pub dim: i64,
    pub degree: u64,
    /// Every generator of the saturated Jacobian ideal lies in the component ideal.
    pub contains_jacobian: bool,
    /// Multiplicity of the Jacobian scheme along the component.
    pub multiplicity: Option<u64>,
    pub hessian_rank: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointCheck {
    pub point: String,
    pub kind: String,
    pub partials_vanish: bool,
    pub isolated: bool,
    pub local: LocalTypeCheck,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularLocusReport {
    pub k: usize,
    pub hf: Vec<u64>,
    pub projective_dim: i64,
    pub degree: u64,
    pub claimed_dim: i64,
    pub components: Vec<ComponentCheck>,
    pub points: Vec<PointCheck>,
    /// Removing every claimed component and point leaves the empty scheme.
    pub exhausted: bool,
    /// The recorded one-cycle `(d, m, ρ)` agrees with the computed curve data.
    pub cycle_package: Option<bool>,
}

impl SingularLocusReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.projective_dim != self.claimed_dim {
            out.push(format!(
                "dimension {} != {}",
                self.projective_dim, self.claimed_dim
            ));
        }
        for c in &self.components {
            if c.dim != c.claimed_dim as i64 || c.degree != c.claimed_degree {
                out.push(format!("component {} shape", c.label));
            }
            if !c.contains_jacobian {
                out.push(format!("component {} not singular", c.label));
            }
        }
        for p in &self.points {
            if !p.partials_vanish {
                out.push(format!("{} not singular", p.point));
            }
            if !p.isolated {
                out.push(format!("{} not isolated", p.point));
            }
            if !p.local.matches {
                out.push(format!("{} local type {}", p.point, p.kind));
            }
        }
        if !self.exhausted {
            out.push("unclaimed singular points".into());
        }
        if self.cycle_package == Some(false) {
            out.push("cycle package".into());
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    /// Curve components as sorted `(d, m, ρ)`.
    pub fn curve_package(&self) -> Vec<(u64, Option<u64>, Option<usize>)> {
        let mut v: Vec<_> = self
            .components
            .iter()
            .filter(|c| c.claimed_dim == 1)
            .map(|c| (c.claimed_degree, c.multiplicity, c.hessian_rank))
            .collect();
        v.sort();
        v
    }
}

/// Saturates away every ideal in `ideals`, one after the other.
fn remove_all<F: Field>(
    mut j: GroebnerBasis<F>,
    ideals: &[&Vec<Poly<F::Elem>>],
) -> GroebnerBasis<F> {
    for gens in ideals {
        if j.is_unit() {
            break;
        }
        j = j.saturate_ideal(gens);
    }
    j
}

/// Checks the singular locus of the normal form of state `k` at sampled
/// parameters against the recorded description.
pub fn verify_singular_locus(
    k: usize,
    seed: u64,
    field: &PrimeField,
) -> Result<SingularLocusReport, SingularError> {
    let spec = locus_spec(k)?;
    let nf = NormalForm::load(k)?;
    let mut rng = seeds::rng(seed, "singular", k as u64);
    let inst = nf.instantiate(field, &mut rng)?;
    let f = &inst.form;
    let ring = f.ring();
    let j = jacobian_scheme(f);
    let h = j.hilbert(HF_WINDOW);

    let ideals: Vec<Vec<Poly<u32>>> = spec
        .components
        .iter()
        .map(|c| component_ideal(c, &ring, &inst.env))
        .collect::<Result<_, _>>()?;

    let mut components = Vec::new();
    for (i, (c, gens)) in spec.components.iter().zip(&ideals).enumerate() {
        let cg = buchberger(&ring, gens);
        let ch = cg.hilbert(HF_WINDOW);
        let contains_jacobian = j.gens.iter().all(|g| cg.contains(g));
        let others: Vec<&Vec<Poly<u32>>> = ideals
            .iter()
            .enumerate()
            .filter(|(t, _)| *t != i && spec.components[*t].dim >= 1)
            .map(|(_, g)| g)
            .collect();
        let residual = remove_all(j.clone(), &others).hilbert(HF_WINDOW);
        let multiplicity = (residual.krull_dim as u32 == c.dim + 1
            && ch.degree > 0
            && residual.degree % ch.degree == 0)
            .then(|| residual.degree / ch.degree);
        let hessian_rank = if c.dim == 1 {
            Some(component_hessian_rank(
                f,
                c,
                &inst.env,
                DEFAULT_PROTOCOL,
                &mut rng,
            )?)
        } else {
            None
        };
        components.push(ComponentCheck {
            label: c.label.clone(),
            group: c.group.clone(),
            claimed_dim: c.dim,
            claimed_degree: c.degree,
            dim: ch.projective_dim(),
            degree: ch.degree,
            contains_jacobian,
            multiplicity,
            hessian_rank,
        });
    }

    let partials: Vec<Poly<u32>> = {
        let p = f.to_poly();
        (0..NVARS).map(|i| ring.derivative(&p, i)).collect()
    };
    let all: Vec<&Vec<Poly<u32>>> = ideals.iter().collect();
    let residual = remove_all(j.clone(), &all);
    let residual_h = residual.hilbert(HF_WINDOW);
    let mut point_ideals = Vec::new();
    let mut points = Vec::new();
    for p in &spec.points {
        let coords = named_point(&p.point).expect("named point");
        let pt = point_elems(field, &coords);
        let pideal: Vec<Poly<u32>> = (0..NVARS)
            .filter(|&i| coords[i] == 0)
            .map(|i| ring.var(i))
            .collect();
        let t = isolated_type(&p.kind).expect("known type");
        points.push(PointCheck {
            point: p.point.clone(),
            kind: p.kind.clone(),
            partials_vanish: vanishes_at(&ring, &partials, &pt),
            isolated: residual_h.krull_dim <= 1 && vanishes_at(&ring, &residual.gens, &pt),
            local: local_type_check(f, &coords, t),
        });
        point_ideals.push(pideal);
    }
    let pref: Vec<&Vec<Poly<u32>>> = point_ideals.iter().collect();
    let exhausted = remove_all(residual, &pref).is_unit();

    let claimed_dim = spec
        .components
        .iter()
        .map(|c| c.dim as i64)
        .chain(spec.points.iter().map(|_| 0))
        .max()
        .unwrap_or(-1);
    let mut report = SingularLocusReport {
        k,
        hf: h.hf.clone(),
        projective_dim: h.projective_dim(),
        degree: h.degree,
        claimed_dim,
        components,
        points,
        exhausted,
        cycle_package: None,
    };
    if let Some(pkg) = golden::filters().cycle_packages.get(&k) {
        let mut want: Vec<(u64, Option<u64>, Option<usize>)> = pkg
            .iter()
            .map(|c| (c.d as u64, Some(c.m as u64), Some(c.rho as usize)))
            .collect();
        want.sort();
        report.cycle_package = Some(want == report.curve_package());
    }
    Ok(report)
}

/// Exact rational view of a weight sum, for reports.
pub fn weight_sum(t: &QhType) -> Rat {
    rat(t.weights.iter().map(|&w| w as i64).sum())
}
