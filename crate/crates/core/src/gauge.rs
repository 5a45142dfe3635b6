//! Random integrable systems: pick `W` invertible and take every coefficient matrix as
//! the logarithmic image of `W` under its operator,
//!
//! ```text
//! A_j = φ_j(W) W^{-1},   B_i = ∂_i(W) W^{-1},   C_i = σ_i(W) W^{-1}
//! ```
//!
//! so `W` is a fundamental solution and every condition holds by construction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{rat, Monomial, Poly, RatFunc, Var};
use crate::field::{FieldContext, FieldError, OpKind, OpRef, OperatorSpec, Role};
use crate::integrability::{SpecError, SystemSpec};
use crate::matrix::Mat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GaugeError {
    #[error("no invertible sample found after {0} attempts")]
    Exhausted(usize),
    #[error("variable {0} is declared twice")]
    Duplicate(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

#[derive(Debug, Clone)]
pub struct GaugeOptions {
    pub n: usize,
    /// Variables with the role of the operator acting on each.
    pub vars: Vec<(String, Role)>,
    /// Total degree bound of the entries of `W`.
    pub degree: u32,
    pub seed: u64,
}

impl Default for GaugeOptions {
    fn default() -> Self {
        GaugeOptions {
            n: 2,
            vars: vec![
                ("x".into(), Role::Phi),
                ("t".into(), Role::Delta),
                ("a".into(), Role::Sigma),
                ("b".into(), Role::Sigma),
            ],
            degree: 2,
            seed: 0,
        }
    }
}

/// A generated system together with the fundamental solution it came from.
#[derive(Debug, Clone)]
pub struct GaugeSystem {
    pub spec: SystemSpec,
    pub w: Mat,
}

/// Builds the context: one operator per variable, its kind drawn from the seed. A
/// dilation factor `q` (renamed if taken) is added when some q-dilation is drawn.
pub fn gauge_context(opts: &GaugeOptions, rng: &mut ChaCha8Rng) -> Result<FieldContext, GaugeError> {
    let mut names: Vec<String> = Vec::new();
    for (v, _) in &opts.vars {
        if names.contains(v) {
            return Err(GaugeError::Duplicate(v.clone()));
        }
        names.push(v.clone());
    }
    let dilate: Vec<bool> = opts.vars.iter().map(|_| rng.gen_bool(0.5)).collect();
    let mut factor = None;
    if opts
        .vars
        .iter()
        .zip(&dilate)
        .any(|((_, role), &d)| *role != Role::Delta && d)
    {
        let mut q = "q".to_string();
        while names.contains(&q) {
            q.push('_');
        }
        factor = Some(Var(names.len() as u32));
        names.push(q);
    }
    let ops = opts
        .vars
        .iter()
        .zip(&dilate)
        .enumerate()
        .map(|(i, ((name, role), &d))| {
            let var = Var(i as u32);
            let kind = match (role, d) {
                (Role::Delta, false) => OpKind::Derivation { var },
                (Role::Delta, true) => OpKind::Euler { var },
                (_, true) => OpKind::QDilate {
                    var,
                    factor: factor.expect("factor declared"),
                },
                (_, false) => OpKind::Shift { var, step: rat(1) },
            };
            OperatorSpec::new(format!("{}{name}", prefix(*role)), *role, kind)
        })
        .collect();
    Ok(FieldContext::new(names, ops)?)
}

fn prefix(role: Role) -> &'static str {
    match role {
        Role::Phi => "p",
        Role::Sigma => "s",
        Role::Delta => "d",
    }
}

fn random_entry(rng: &mut ChaCha8Rng, vars: &[Var], degree: u32, constant: i64) -> Poly {
    let monos = crate::solver::monomials_up_to(vars, degree);
    let terms = rng.gen_range(0..=2);
    let mut p = Poly::from_int(constant);
    for _ in 0..terms {
        let m: &Monomial = &monos[rng.gen_range(0..monos.len())];
        let c = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        p = &p + &Poly::term(m.clone(), rat(c));
    }
    p
}

/// Adds a term through each variable missing from `w` to a random entry.
fn cover_vars(rng: &mut ChaCha8Rng, mut w: Mat, vars: &[Var], degree: u32) -> Mat {
    let seen: Vec<Var> = w.entries().iter().flat_map(RatFunc::vars).collect();
    for &v in vars.iter().filter(|v| !seen.contains(v)) {
        let monos = crate::solver::monomials_up_to(vars, degree - 1);
        let m = Monomial::var(v).mul(&monos[rng.gen_range(0..monos.len())]);
        let c = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let (i, j) = (rng.gen_range(0..w.rows()), rng.gen_range(0..w.cols()));
        let entry = w.get(i, j).add(&RatFunc::from(Poly::term(m, rat(c))));
        w.set(i, j, entry);
    }
    w
}

/// Coefficient matrices of the system with fundamental solution `w`.
pub fn gauge_spec(ctx: &FieldContext, w: &Mat) -> Result<SystemSpec, GaugeError> {
    let winv = w.inv().map_err(FieldError::from)?;
    let log = |id| -> Result<Mat, GaugeError> {
        let image = ctx.apply_mat(OpRef::forward(id), w)?;
        Ok(image.mul(&winv).map_err(FieldError::from)?)
    };
    let a = ctx.phi().iter().map(|&id| log(id)).collect::<Result<_, _>>()?;
    let b = ctx.delta().iter().map(|&id| log(id)).collect::<Result<_, _>>()?;
    let c = ctx.sigma().iter().map(|&id| log(id)).collect::<Result<_, _>>()?;
    Ok(SystemSpec::new(ctx.clone(), w.rows(), a, b, c)?)
}

/// Deterministic per seed. For positive degree every operator variable is made to occur
/// in `W`, so that no operator acts trivially; draws repeat until `W` is invertible.
pub fn generate(opts: &GaugeOptions) -> Result<GaugeSystem, GaugeError> {
    const ATTEMPTS: usize = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let ctx = gauge_context(opts, &mut rng)?;
    let vars: Vec<Var> = (0..opts.vars.len() as u32).map(Var).collect();
    for _ in 0..ATTEMPTS {
        let w = Mat::from_fn(opts.n, opts.n, |i, j| {
            let constant = if i == j { rng.gen_range(1..=3) } else { rng.gen_range(-1..=1) };
            RatFunc::from(random_entry(&mut rng, &vars, opts.degree, constant))
        });
        let w = if opts.degree > 0 {
            cover_vars(&mut rng, w, &vars, opts.degree)
        } else {
            w
        };
        if w.is_invertible() {
            let spec = gauge_spec(&ctx, &w)?;
            return Ok(GaugeSystem { spec, w });
        }
    }
    Err(GaugeError::Exhausted(ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrability::check_all;

    #[test]
    fn identity_gauge_gives_identity_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ctx = gauge_context(&GaugeOptions::default(), &mut rng).unwrap();
        let spec = gauge_spec(&ctx, &Mat::identity(2)).unwrap();
        assert!(spec.a.iter().chain(&spec.c).all(Mat::is_identity));
        assert!(spec.b.iter().all(Mat::is_zero));
    }

    #[test]
    fn generated_systems_are_integrable_and_deterministic() {
        for seed in 0..6 {
            let opts = GaugeOptions { seed, ..Default::default() };
            let g = generate(&opts).unwrap();
            assert!(g.spec.ctx.validate_commutation().is_empty());
            assert!(check_all(&g.spec, &g.spec.c).unwrap().all_passed());
            let again = generate(&opts).unwrap();
            assert_eq!(again.w, g.w);
            let seen: Vec<Var> = g.w.entries().iter().flat_map(RatFunc::vars).collect();
            assert!((0..4).all(|v| seen.contains(&Var(v))));
        }
    }
}
