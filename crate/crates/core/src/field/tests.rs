use super::*;
use crate::arith::rat;
use crate::testing::{e, hypergeometric_ctx};

fn ctx_with(vars: &[&str], ops: Vec<OperatorSpec>) -> FieldContext {
    FieldContext::new(vars.iter().map(|s| s.to_string()).collect(), ops).unwrap()
}

fn id(ctx: &FieldContext, name: &str) -> OpId {
    ctx.op_by_name(name).unwrap()
}

#[test]
fn sigma_a_on_ground_solution() {
    let ctx = hypergeometric_ctx();
    let f = e(&ctx, "1/((a-c)*(b-c))");
    let g = ctx.apply(id(&ctx, "sa").into(), &f).unwrap();
    assert_eq!(g, e(&ctx, "1/((q*a-c)*(b-c))"));
    assert_eq!(g.div(&f).unwrap(), e(&ctx, "(a-c)/(q*a-c)"));
    let back = ctx.apply(OpRef::inverse(id(&ctx, "sa")), &g).unwrap();
    assert_eq!(back, f);
}

#[test]
fn derivations() {
    let ctx = ctx_with(
        &["x", "y"],
        vec![
            OperatorSpec::new("dx", Role::Delta, OpKind::Derivation { var: Var(0) }),
            OperatorSpec::new("th", Role::Delta, OpKind::Euler { var: Var(0) }),
        ],
    );
    let c = RatFunc::constant(rat(7));
    assert!(ctx.apply(id(&ctx, "dx").into(), &c).unwrap().is_zero());
    let f = e(&ctx, "(x-1)/x");
    assert_eq!(ctx.apply(id(&ctx, "th").into(), &f).unwrap(), e(&ctx, "1/x"));
    assert_eq!(
        ctx.apply(OpRef::inverse(id(&ctx, "dx")), &f),
        Err(FieldError::InverseOfDerivation("dx".into()))
    );
}

#[test]
fn commutation_examples() {
    assert!(hypergeometric_ctx().validate_commutation().is_empty());
    let ok = ctx_with(
        &["x"],
        vec![
            OperatorSpec::new("s", Role::Phi, OpKind::Shift { var: Var(0), step: rat(1) }),
            OperatorSpec::new("d", Role::Delta, OpKind::Derivation { var: Var(0) }),
        ],
    );
    assert!(ok.validate_commutation().is_empty());
    let broken = ctx_with(
        &["x", "q"],
        vec![
            OperatorSpec::new("p", Role::Phi, OpKind::QDilate { var: Var(0), factor: Var(1) }),
            OperatorSpec::new("t", Role::Delta, OpKind::Euler { var: Var(1) }),
        ],
    );
    let v = broken.validate_commutation();
    assert!(v.iter().any(|c| c.variable == "x"));
}

#[test]
fn structural_validation() {
    let vars = vec!["x".to_string(), "q".to_string()];
    let bad_role = OperatorSpec::new("d", Role::Sigma, OpKind::Derivation { var: Var(0) });
    assert!(matches!(
        FieldContext::new(vars.clone(), vec![bad_role]),
        Err(FieldError::InvalidOperator { .. })
    ));
    let self_factor = OperatorSpec::new("p", Role::Phi, OpKind::QDilate { var: Var(0), factor: Var(0) });
    assert!(FieldContext::new(vars.clone(), vec![self_factor]).is_err());
    assert_eq!(
        FieldContext::new(vec!["x".into(), "x".into()], vec![]).unwrap_err(),
        FieldError::DuplicateName("x".into())
    );
}

#[test]
fn partition_and_principal_vars() {
    let ctx = hypergeometric_ctx();
    assert_eq!(ctx.phi().len(), 1);
    assert_eq!(ctx.sigma().len(), 3);
    assert_eq!(ctx.principal_vars(), vec![Var(1)]);
    assert_eq!(ctx.parameter_vars(), vec![Var(0), Var(2), Var(3), Var(4)]);
}

#[test]
fn adjoined_family_actions() {
    let ctx = hypergeometric_ctx();
    let ea = Mat::scalar(1, &e(&ctx, "(a-c)/(q*a-c)"));
    let eb = Mat::scalar(1, &e(&ctx, "(b-c)/(q*b-c)"));
    let (ext, members) = ctx.adjoin_family(2, vec![ea, eb]).unwrap();
    let x1 = RatFunc::var(members[0]);
    assert_eq!(ext.var_name(members[0]), "xi3_1");
    let (sa, sb, sc, phq) = (id(&ext, "sa"), id(&ext, "sb"), id(&ext, "sc"), id(&ext, "phq"));

    let ax = ext.apply(sa.into(), &x1).unwrap();
    assert_eq!(ax, e(&ext, "(a-c)/(q*a-c)*xi3_1"));
    assert_eq!(ext.apply(OpRef::inverse(sa), &ax).unwrap(), x1);
    assert_eq!(ext.apply(phq.into(), &x1).unwrap(), x1);

    let cx = ext.apply(sc.into(), &x1).unwrap();
    assert_eq!(format!("{}", ext.var_name(cx.vars()[0])), "xi3_1__sc_1");
    assert_eq!(ext.apply(OpRef::inverse(sc), &cx).unwrap(), x1);

    // The linear and free actions commute.
    for (u, w) in [(sa, sc), (sb, sc), (sa, sb)] {
        let uw = ext.apply(u.into(), &ext.apply(w.into(), &x1).unwrap()).unwrap();
        let wu = ext.apply(w.into(), &ext.apply(u.into(), &x1).unwrap()).unwrap();
        assert_eq!(uw, wu);
    }
    assert_eq!(ext.resolve("xi3_1__sc_m2").map(|v| ext.var_name(v)), Some("xi3_1__sc_m2".into()));
    assert_eq!(ext.resolve("xi3_1__sa_1"), None);
    assert_eq!(ext.adjoined_count(), 1);
    // Original context is untouched.
    assert_eq!(ctx.resolve("xi3_1"), None);
}
