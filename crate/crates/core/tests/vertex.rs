use num_bigint::BigInt;
use verdex_core::algebras::{
    affine, commutative_power_series, diagonal, free_boson, free_boson_t, free_fermion, virasoro,
    LieData,
};
use verdex_core::conformal::{check_l2, lambda_bracket};
use verdex_core::fields::{apply_field, locality_order, mode_commutator};
use verdex_core::identities::{check_nproduct_field, check_skew};
use verdex_core::series::Window;
use verdex_core::states::State;
use verdex_core::verify::{run_verify, Suite, VerifyConfig};
use verdex_core::{NormCtx, Scalar, ScalarRing, VertexAlgebra};

fn q() -> ScalarRing {
    ScalarRing::Rationals
}

fn shipped() -> Vec<VertexAlgebra> {
    let t = NormCtx::Trivial;
    let p2 = NormCtx::padic(2).unwrap();
    let p3 = NormCtx::padic(3).unwrap();
    let vir = virasoro(t, q()).unwrap();
    vec![
        free_boson(t).unwrap(),
        free_boson(p3).unwrap(),
        free_boson_t(p2).unwrap(),
        free_boson_t(p3).unwrap(),
        free_fermion(t).unwrap(),
        vir.central_quotient(&Scalar::ratio(1, 2)).unwrap(),
        virasoro(p3, "Z[1/2]".parse().unwrap()).unwrap(),
        vir,
        affine(LieData::abelian_rank1(), t, q()).unwrap(),
        affine(LieData::sl2(), t, q()).unwrap(),
        commutative_power_series(Scalar::ratio(1, 2), 8, t).unwrap(),
        diagonal(3, 6).unwrap(),
    ]
}

fn factorial(n: u32) -> Scalar {
    Scalar::from_bigint((1..=n).map(BigInt::from).product())
}

#[test]
fn every_shipped_algebra_constructs() {
    let names: Vec<String> = shipped().iter().map(VertexAlgebra::name).collect();
    assert_eq!(names.len(), 12);
    assert!(virasoro(NormCtx::Trivial, "Z".parse().unwrap()).is_err());
}

#[test]
fn fs_inverts_state_field() {
    for v in shipped() {
        for p in v.probes(3).iter().filter(|p| v.in_v_prime(p)) {
            let f = v.state_field(p).unwrap();
            assert_eq!(&v.fs(&f), p, "{}", v.name());
        }
    }
}

#[test]
fn nproduct_field_identity() {
    let v = virasoro(NormCtx::Trivial, q()).unwrap();
    let probes = v.probes(3);
    let l = v.parse_state("L[-2]").unwrap();
    let l3 = v.parse_state("L[-3]").unwrap();
    for (a, b) in [(&l, &l), (&l, &l3), (&l3, &l)] {
        for n in -2..4 {
            let r = check_nproduct_field(&v, a, b, n, &probes, -3..=4).unwrap();
            assert!(r.is_exact_zero(), "{n}: {:?}", r.defect);
        }
    }
}

#[test]
fn boson_heisenberg_relations() {
    let v = free_boson(NormCtx::Trivial).unwrap();
    let a = v.generator("a").unwrap();
    for p in v.probes(8) {
        for m in -4i64..5 {
            for n in -4i64..5 {
                let c = mode_commutator(a, a, m, n, &p);
                let want = if m + n == 0 { p.scaled(&Scalar::from_int(m)) } else { State::zero(v.space()) };
                assert_eq!(c, want, "[a_({m}), a_({n})]");
            }
        }
    }
}

#[test]
fn virasoro_relations() {
    let v = virasoro(NormCtx::Trivial, q()).unwrap();
    let l = v.generator("L").unwrap();
    let c = v.state_field(&v.parse_state("C").unwrap()).unwrap();
    // L_m is the field mode L_(m+1)
    for p in v.probes(4) {
        for m in -3i64..4 {
            for n in -3i64..4 {
                let got = mode_commutator(l, l, m + 1, n + 1, &p);
                let mut want = l.mode(m + n + 1, &p).scaled(&Scalar::from_int(m - n));
                if m + n == 0 {
                    want.add_scaled(&c.mode(-1, &p), &Scalar::ratio(m * m * m - m, 12));
                }
                assert_eq!(got, want, "[L_{m}, L_{n}]");
            }
        }
    }
}

#[test]
fn lambda_coefficients_are_divided_products() {
    for v in [
        virasoro(NormCtx::Trivial, q()).unwrap(),
        affine(LieData::sl2(), NormCtx::Trivial, q()).unwrap(),
        free_boson(NormCtx::Trivial).unwrap().base_change(q()).unwrap(),
    ] {
        let probes = v.probes(3);
        for a in probes.iter().take(5) {
            for b in probes.iter().take(5) {
                let lb = lambda_bracket(&v, a, b).unwrap();
                for n in 0..6u32 {
                    let want = v.apply_mode(a, n as i64, b).unwrap();
                    let got = lb.coeff(n).cloned().unwrap_or_else(|| State::zero(v.space()));
                    assert_eq!(got.scaled(&factorial(n)), want, "{} n = {n}", v.name());
                }
            }
        }
    }
}

#[test]
fn lambda_skew_agrees_with_mode_skew() {
    let v = free_fermion(NormCtx::Trivial).unwrap().base_change(q()).unwrap();
    let probes = v.probes(3);
    for a in probes.iter().take(6) {
        for b in probes.iter().take(6) {
            let ns: Vec<i64> = (-3..4).collect();
            assert!(check_skew(&v, a, b, &ns).unwrap().is_exact_zero());
            assert!(check_l2(&v, a, b).unwrap().is_exact_zero());
        }
    }
}

#[test]
fn virasoro_quotient_lambda_bracket() {
    let v = virasoro(NormCtx::Trivial, q())
        .unwrap()
        .central_quotient(&Scalar::ratio(1, 2))
        .unwrap();
    let l = v.parse_state("L[-2]").unwrap();
    let lb = lambda_bracket(&v, &l, &l).unwrap();
    assert_eq!(lb.coeff(0).unwrap(), &v.parse_state("L[-3]").unwrap());
    assert_eq!(lb.coeff(1).unwrap(), &l.scaled(&Scalar::from_int(2)));
    assert!(lb.coeff(2).is_none());
    assert_eq!(lb.coeff(3).unwrap(), &v.vacuum().scaled(&Scalar::ratio(1, 24)));
    let free = virasoro(NormCtx::Trivial, q()).unwrap();
    let lb = lambda_bracket(&free, &l, &l).unwrap();
    assert_eq!(lb.render(&free), "L[-3] + 2λ L[-2] + (1/12)λ^3 C");
}

#[test]
fn sl2_borcherds_suite() {
    let v = affine(LieData::sl2(), NormCtx::Trivial, q())
        .unwrap()
        .central_quotient(&Scalar::one())
        .unwrap();
    let cfg = VerifyConfig {
        cases: 10,
        grade_cap: 4,
        mode_bound: 2,
        parallel: false,
        ..VerifyConfig::default()
    };
    let r = run_verify(&v, &[Suite::Borcherds, Suite::Commutator], &cfg).unwrap();
    for s in &r.suites {
        assert_eq!(s.summary.exact_zero, 10, "{}: {:?}", s.suite, s.summary);
    }
}

#[test]
fn windows_are_sound() {
    let v = free_boson(NormCtx::Trivial).unwrap();
    let a = v.generator("a").unwrap();
    let small = Window::new(-5, 5).unwrap();
    let large = Window::new(-20, 20).unwrap();
    for p in v.probes(4) {
        let s = apply_field(a, &p, small);
        let l = apply_field(a, &p, large);
        for e in small.iter() {
            assert_eq!(s.coeff(e).unwrap(), l.coeff(e).unwrap());
        }
        assert!(s.coeff(9).is_err());
    }
    let probes = v.probes(2);
    for w in [Window::new(-8, 8).unwrap(), Window::new(-14, 14).unwrap()] {
        let r = locality_order(a, a, &probes, 6, w, v.ctx()).unwrap();
        assert_eq!(r.order, Some(2));
    }
}

#[test]
fn closure_contains_derivative() {
    let v = virasoro(NormCtx::Trivial, q()).unwrap();
    let entries = v.closure_generate(1, 0..=1).unwrap();
    let fs: Vec<State> = entries.iter().map(|e| e.fs.clone()).collect();
    assert!(fs.contains(&v.parse_state("L[-3]").unwrap()));
    assert!(fs.contains(&v.vacuum()));
}
