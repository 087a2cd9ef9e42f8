//! The closed-orbit normal forms of the 38 states.
//!
//! Each record stores the form as an expression in the coordinates, its
//! moduli parameters, the named generic subforms, and the polynomials in the
//! parameters that must not vanish.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use atlas_algebra::{Field, Ring};
use rand::Rng;
use serde::Deserialize;

use crate::expr::{parse, Env, Expr, ExprError};
use crate::forms::{FormError, QuinticForm, SampleField, DEFAULT_BOUND};
use crate::golden::TestKind;

#[derive(Clone, Debug, Deserialize)]
pub struct NormalFormRecord {
    pub k: usize,
    pub test: TestKind,
    pub dim_phi: u32,
    pub expr: String,
    pub params: Vec<String>,
    pub generic_forms: Vec<String>,
    pub exclusions: Vec<String>,
}

#[derive(Deserialize)]
struct NormalFormFile {
    normal_forms: Vec<NormalFormRecord>,
}

pub fn records() -> &'static [NormalFormRecord] {
    static CELL: OnceLock<Vec<NormalFormRecord>> = OnceLock::new();
    CELL.get_or_init(|| {
        let f: NormalFormFile = serde_json::from_str(include_str!("../data/normal_forms.json"))
            .expect("normal_forms.json");
        f.normal_forms
    })
}

pub fn record(k: usize) -> &'static NormalFormRecord {
    &records()[k - 1]
}

#[derive(Debug, thiserror::Error)]
pub enum NormalFormError {
    #[error("state {0} is not in 1..=38")]
    UnknownState(usize),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("no admissible parameters after {0} draws")]
    Degenerate(usize),
}

/// A parsed normal form.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub k: usize,
    pub body: Expr,
    pub params: Vec<String>,
    pub exclusions: Vec<Expr>,
}

const MAX_DRAWS: usize = 64;

impl NormalForm {
    pub fn load(k: usize) -> Result<Self, NormalFormError> {
        if !(1..=records().len()).contains(&k) {
            return Err(NormalFormError::UnknownState(k));
        }
        let rec = record(k);
        Ok(NormalForm {
            k,
            body: parse(&rec.expr)?,
            params: rec.params.clone(),
            exclusions: rec
                .exclusions
                .iter()
                .map(|s| parse(s))
                .collect::<Result<_, _>>()?,
        })
    }

    /// True when no exclusion polynomial vanishes at `params`.
    pub fn admissible<F: SampleField>(
        &self,
        field: &F,
        params: &BTreeMap<String, F::Elem>,
    ) -> Result<bool, NormalFormError> {
        let ring = Ring::new(field.clone(), 5);
        for e in &self.exclusions {
            if e.eval_closed(&ring, params)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The form at the parameters of `env`, drawing any generic subforms
    /// not already present.
    pub fn evaluate<F: SampleField, R: Rng + ?Sized>(
        &self,
        field: &F,
        env: &mut Env<F::Elem>,
        rng: &mut R,
    ) -> Result<QuinticForm<F>, NormalFormError> {
        let ring = Ring::new(field.clone(), 5);
        let p = self.body.eval(&ring, env, rng)?;
        Ok(QuinticForm::from_poly(field.clone(), &p)?)
    }

    /// Draws admissible parameters and generic subforms.
    pub fn instantiate<F: SampleField, R: Rng + ?Sized>(
        &self,
        field: &F,
        rng: &mut R,
    ) -> Result<Instance<F>, NormalFormError> {
        for _ in 0..MAX_DRAWS {
            let params: BTreeMap<String, F::Elem> = self
                .params
                .iter()
                .map(|p| (p.clone(), field.sample_nonzero(rng, DEFAULT_BOUND)))
                .collect();
            if !self.admissible(field, &params)? {
                continue;
            }
            let mut env = Env::with_params(params);
            let form = self.evaluate(field, &mut env, rng)?;
            return Ok(Instance {
                k: self.k,
                env,
                form,
            });
        }
        Err(NormalFormError::Degenerate(MAX_DRAWS))
    }
}

/// A normal form at sampled parameters, with the values that produced it.
#[derive(Clone, Debug)]
pub struct Instance<F: Field> {
    pub k: usize,
    pub env: Env<F::Elem>,
    pub form: QuinticForm<F>,
}

pub fn instantiate<F: SampleField, R: Rng + ?Sized>(
    k: usize,
    field: &F,
    rng: &mut R,
) -> Result<QuinticForm<F>, NormalFormError> {
    Ok(NormalForm::load(k)?.instantiate(field, rng)?.form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::tabulated_states;
    use crate::golden;
    use atlas_algebra::PrimeField;

    #[test]
    fn records_align_with_states() {
        assert_eq!(records().len(), 38);
        for (rec, row) in records().iter().zip(golden::states()) {
            assert_eq!(rec.k, row.k);
            assert_eq!(rec.test, row.test);
            assert_eq!(rec.dim_phi, row.dim_phi);
            let nf = NormalForm::load(rec.k).unwrap();
            assert_eq!(nf.body.params().into_iter().collect::<Vec<_>>(), rec.params);
            assert_eq!(nf.body.generic_forms(), rec.generic_forms);
        }
    }

    #[test]
    fn supports_lie_on_walls() {
        let field = PrimeField::default();
        for st in tabulated_states() {
            let mut rng = crate::seeds::rng(5, "nf", st.k as u64);
            let f = instantiate(st.k, &field, &mut rng).unwrap();
            assert!(!f.is_zero());
            assert!(f.support().is_subset(&st.wall), "k = {}", st.k);
        }
    }

    #[test]
    fn exclusions_are_enforced() {
        let field = PrimeField::default();
        let nf = NormalForm::load(1).unwrap();
        let mut ps = BTreeMap::new();
        ps.insert("alpha".to_string(), field.inv(&256));
        assert!(!nf.admissible(&field, &ps).unwrap());
        ps.insert("alpha".to_string(), 3);
        assert!(nf.admissible(&field, &ps).unwrap());
        assert!(matches!(
            NormalForm::load(39),
            Err(NormalFormError::UnknownState(39))
        ));
    }
}
