use num_rational::BigRational;
use num_traits::Zero;
use rank2toda::lax::{CoefficientSet, SystemId};
use rank2toda::poly::Poly1;
use rank2toda::solution::solve_exact;
use rank2toda::rational::{rat, rat_int, rat_to_string};

fn lift(r: &BigRational) -> BigRational { r.clone() }

#[test]
fn probe_pb4_dsq_channel() {
    use rank2toda::systems::EvalCtx;
    let mut coeffs = CoefficientSet::zero(SystemId::G2_01);
    coeffs.set("dsq", Poly1::constant(rat_int(1))).unwrap();
    coeffs.set("dbsq", Poly1::constant(rat_int(1))).unwrap();
    coeffs.set("db1", Poly1::constant(rat(1,2))).unwrap();
    coeffs.set("db2", Poly1::constant(rat(-2,3))).unwrap();
    coeffs.set("db3", Poly1::constant(rat(3,1))).unwrap();
    coeffs.set("db4", Poly1::constant(rat(1,5))).unwrap();
    let sol = solve_exact(SystemId::G2_01, &coeffs).unwrap();
    for (x, y) in [(rat(1,3), rat(2,7)), (rat(1,5), rat(3,4)), (rat(2,3), rat(1,2))] {
        let pd = sol.point_data(&x, &y);
        let mut cvals = std::collections::BTreeMap::new();
        for name in SystemId::G2_01.coefficient_names() {
            let t = if SystemId::is_barred(name) { &y } else { &x };
            cvals.insert(name.to_string(), coeffs.eval(name, t).unwrap());
        }
        let ctx = EvalCtx::new(SystemId::G2_01, [sol.rep(1), sol.rep(2)], pd, cvals);
        let u = ctx.u_matrix(false, false, &lift);
        let det = u[(0,0)].clone()*u[(1,1)].clone() - u[(0,1)].clone()*u[(1,0)].clone();
        let lhs = rat(2,1) * ctx.alpha_bar_dx(&[2], &lift).unwrap();
        let (u11, u12) = (u[(0,0)].clone(), u[(0,1)].clone());
        let p_dsq = [
            rat(1,3)*ctx.alpha(&[1,1,1,2], &lift).unwrap(),
            rat(1,3)*ctx.alpha(&[1,1,2], &lift).unwrap(),
            rat(2,3)*ctx.alpha(&[1,2], &lift).unwrap(),
            rat(2,1)*ctx.alpha(&[2], &lift).unwrap(),
        ];
        let rhs = rat(2,1)/(det.clone()*det.clone()) * (
            p_dsq[0].clone()*u11.clone()*u11.clone()*u11.clone()
            - rat(3,1)*p_dsq[1].clone()*u11.clone()*u11.clone()*u12.clone()
            + rat(3,1)*p_dsq[2].clone()*u11.clone()*u12.clone()*u12.clone()
            - p_dsq[3].clone()*u12.clone()*u12.clone()*u12.clone());
        if !rhs.is_zero() {
            println!("({},{}): ratio = {}  diff = {}", rat_to_string(&x), rat_to_string(&y),
                rat_to_string(&(&lhs / &rhs)), rat_to_string(&(&lhs - &rhs)));
        } else {
            println!("({},{}): rhs = 0, lhs = {}", rat_to_string(&x), rat_to_string(&y), rat_to_string(&lhs));
        }
    }
}
