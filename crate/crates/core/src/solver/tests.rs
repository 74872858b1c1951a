use super::*;
use crate::model::{self, ProblemFile};

const L: usize = 5;

fn b(text: &str) -> Ban {
    Ban::parse(text, L).unwrap()
}

fn standard(json: &str) -> Naqp {
    model::to_standard_form(&ProblemFile::from_json(json).unwrap().to_lex_problem(L).unwrap())
        .unwrap()
}

fn embedded(json: &str) -> EmbeddedNaqp {
    let std = standard(json);
    let (w1, w2) = model::estimate_weights(&std);
    model::embed(&std, w1, w2)
}

#[test]
fn starting_point_identity_example() {
    let a = BanMatrix::identity(3, L);
    let b1 = BanVector::ones(3, L);
    let c1 = BanVector::ones(3, L);
    let q = BanMatrix::zeros(3, 3, L);
    let (x, _, s) = starting_point(&a, &b1, &c1, &q).unwrap();
    for e in x.iter() {
        assert_eq!(*e, b("1"));
    }
    assert!(s.is_strictly_positive());
}

#[test]
fn starting_point_reproduces_printed_first_row() {
    // the two-objective LP in standard form, before embedding
    let p = standard(crate::fixtures::EXP1);
    let (x, _, s) = starting_point(&p.a, &p.b, &p.c, &p.q).unwrap();
    assert!(x.is_strictly_positive() && s.is_strictly_positive());
    let mu = x.dot(&s).scale(1.0 / x.dim() as f64);
    assert!(
        (x[0].leading_coeff() - 98.80).abs() < 5e-3,
        "x1 = {}",
        x[0]
    );
    assert!(
        (x[1].leading_coeff() - 40.51).abs() < 5e-3,
        "x2 = {}",
        x[1]
    );
    assert!((mu.leading_coeff() - 273.00).abs() < 5e-3, "mu = {mu}");
}

#[test]
fn residuals_vanish_at_kkt_points() {
    // min x₁ + x₂ s.t. x₁ + x₂ = 1: optimum any feasible point with
    // λ = 1, s = 0 … perturb to strict interior instead
    let a = BanMatrix::from_reals(&[vec![1.0, 1.0]], L);
    let bb = BanVector::from_reals(&[1.0], L);
    let c = BanVector::from_reals(&[1.0, 1.0], L);
    let q = BanMatrix::zeros(2, 2, L);

    // feasible primal point zeroes r_b
    let x = BanVector::from_reals(&[0.25, 0.75], L);
    let lambda = BanVector::from_reals(&[0.5], L);
    let s = BanVector::from_reals(&[0.5, 0.5], L);
    let (r_b, r_c, _, _) = residuals_and_mu(&a, &bb, &c, &q, &x, &lambda, &s);
    assert!(r_b.iter().all(|e| e.is_zero()));
    assert!(r_c.iter().all(|e| e.is_zero()));
}

#[test]
fn newton_direction_is_zero_at_kkt() {
    let a = BanMatrix::from_reals(&[vec![1.0, 1.0]], L);
    let bb = BanVector::from_reals(&[1.0], L);
    let c = BanVector::from_reals(&[1.0, 2.0], L);
    let q = BanMatrix::zeros(2, 2, L);
    // optimum x = (1, 0), λ = 1, s = (0, 1); keep strictly interior copy
    let x = BanVector::from_reals(&[1.0, 1e-9], L);
    let lambda = BanVector::from_reals(&[1.0], L);
    let s = BanVector::from_reals(&[1e-9, 1.0], L);
    let (r_b, r_c, r_mu, _) = residuals_and_mu(&a, &bb, &c, &q, &x, &lambda, &s);
    let (dx, dl, ds) =
        newton_solve(&a, &q, &x, &s, (&r_c.neg(), &r_b.neg(), &r_mu.neg()), 0).unwrap();
    for v in dx.iter().chain(dl.iter()).chain(ds.iter()) {
        assert!(
            v.is_zero() || v.leading_coeff().abs() < 1e-6,
            "direction not negligible: {v}"
        );
    }
}

#[test]
fn newton_solves_single_variable_problem() {
    // min x s.t. x = 1 from x = 2, λ = 0, s = 1:
    // system [0 1 1; 1 0 0; 1 0 2]·d = (0, −1, −2) by hand: Δx = −1,
    // Δs = (−2 − Δx)/2 = −await…, Δλ = 1 − Δs
    let a = BanMatrix::from_reals(&[vec![1.0]], L);
    let bb = BanVector::from_reals(&[1.0], L);
    let c = BanVector::from_reals(&[1.0], L);
    let q = BanMatrix::zeros(1, 1, L);
    let x = BanVector::from_reals(&[2.0], L);
    let lambda = BanVector::from_reals(&[0.0], L);
    let s = BanVector::from_reals(&[1.0], L);
    let (r_b, r_c, r_mu, _) = residuals_and_mu(&a, &bb, &c, &q, &x, &lambda, &s);
    let (dx, dl, ds) =
        newton_solve(&a, &q, &x, &s, (&r_c.neg(), &r_b.neg(), &r_mu.neg()), 0).unwrap();
    // elimination by hand: Δx = −1, 2Δs = −xs − sΔx = −2 + 1 → Δs = −0.5,
    // Δλ + Δs = 0 → Δλ = 0.5
    assert_eq!(dx[0], b("-1"));
    assert_eq!(ds[0], b("-0.5"));
    assert_eq!(dl[0], b("0.5"));
}

#[test]
fn measures_match_examples() {
    // exactly feasible x gives ρ₁ = 0
    let a = BanMatrix::from_reals(&[vec![1.0, 1.0]], L);
    let bb = BanVector::from_reals(&[1.0], L);
    let c = BanVector::from_reals(&[1.0, 2.0], L);
    let q = BanMatrix::zeros(2, 2, L);
    let x = BanVector::from_reals(&[0.5, 0.5], L);
    let lambda = BanVector::from_reals(&[0.0], L);
    let s = BanVector::from_reals(&[1.0, 1.0], L);
    let (r_b, r_c, _, mu) = residuals_and_mu(&a, &bb, &c, &q, &x, &lambda, &s);
    let (rho1, _, _) = convergence_measures(&bb, &c, &q, &x, &r_b, &r_c, &mu);
    assert!(rho1.is_zero());

    // all-infinitesimal b with a finite residual blows ρ₁ up to an infinite
    // value: finite approximations are no longer judged converged
    let bb = BanVector::new(vec![Ban::eta(L)]);
    let x = BanVector::from_reals(&[1.0, 0.5], L);
    let (r_b, r_c, _, mu) = residuals_and_mu(&a, &bb, &c, &q, &x, &lambda, &s);
    let (rho1, _, _) = convergence_measures(&bb, &c, &q, &x, &r_b, &r_c, &mu);
    assert!(rho1.is_infinite_value(), "rho1 = {rho1}");

    // α-scale b with a tiny α-scale residual stays finite and below ε
    let a = BanMatrix::from_reals(&[vec![1.0, 0.0], vec![0.0, 1.0]], L);
    let bb = BanVector::new(vec![b("2"), b("-1a")]);
    let r_b = BanVector::new(vec![Ban::zero(L), b("1e-9a")]);
    let r_c = BanVector::zeros(2, L);
    let q = BanMatrix::zeros(2, 2, L);
    let x = BanVector::from_reals(&[1.0, 1.0], L);
    let mu = b("1e-9");
    let (rho1, _, _) = convergence_measures(&bb, &c, &q, &x, &r_b, &r_c, &mu);
    assert_eq!(rho1.power(), 0);
    assert!(rho1.leading_coeff() < 1e-8, "rho1 = {rho1}");
}

#[test]
fn convergence_check_levels() {
    let tiny = Ban::real(1e-9, L);
    let rho = (tiny.clone(), tiny.clone(), tiny.clone());
    assert!(check_convergence(&rho, (2, 2, 2), 1e-8));

    let rho_bad = (b("0.5"), tiny.clone(), tiny.clone());
    assert!(!check_convergence(&rho_bad, (2, 2, 2), 1e-8));

    // small at the leading level but not at the second checked level
    let rho_deep = (b("1e-9+0.5n"), tiny.clone(), tiny.clone());
    assert!(!check_convergence(&rho_deep, (2, 2, 2), 1e-8));
    assert!(check_convergence(&rho_deep, (1, 1, 1), 1e-8));

    // a measure with positive leading power never passes
    let rho_inf = (b("1e-9a"), tiny.clone(), tiny);
    assert!(!check_convergence(&rho_inf, (1, 1, 1), 1e-8));
}

#[test]
fn step_length_examples() {
    // nothing decreasing: the damped cap applies
    let v = BanVector::from_reals(&[1.0, 2.0], L);
    let dv = BanVector::from_reals(&[0.5, 0.0], L);
    assert_eq!(step_length(&v, &dv, 0.99), b("0.99"));

    // ratio ½ damped
    let v = BanVector::from_reals(&[1.0], L);
    let dv = BanVector::from_reals(&[-2.0], L);
    assert_eq!(step_length(&v, &dv, 0.99), b("0.495"));

    // infinitesimal entry forces an infinitesimal step
    let v = BanVector::new(vec![b("1"), Ban::eta(L)]);
    let dv = BanVector::from_reals(&[-1.0, -1.0], L);
    assert_eq!(step_length(&v, &dv, 0.99), b("0.99n"));
}

#[test]
fn sigma_examples() {
    assert_eq!(mehrotra_sigma(&b("2"), &b("2")), b("1"));
    assert_eq!(mehrotra_sigma(&b("2"), &b("1")), b("0.125"));
    // Ban division then lead_mon: ((0.1)/(1+η))³ → 1e−3
    let sigma = mehrotra_sigma(&b("1+n"), &b("0.1"));
    assert_eq!(sigma.power(), 0);
    assert!((sigma.leading_coeff() - 1e-3).abs() < 1e-12);
}

#[test]
fn recentering_matches_worked_example() {
    // x = (1e−9, 2), s = (3, 1e−9), μ = 2.5e−9, n = 2, ε = 1e−8:
    // both pairs flag; ξ = 2μ′/(3+2) with μ′ = lead_mon(μ)η
    let x = BanVector::new(vec![b("1e-9"), b("2")]);
    let s = BanVector::new(vec![b("3"), b("1e-9")]);
    let mu = b("2.5e-9");
    let (nx, ns) = update_zero_entries(&x, &s, &mu, 1e-8, 1.0);
    let xi = b("1e-9n");
    assert_eq!(nx[0], xi, "got {}", nx[0]);
    assert_eq!(ns[1], xi);
    assert_eq!(nx[1], b("2"));
    assert_eq!(ns[0], b("3"));
    // flagged products now sit one magnitude below μ
    assert_eq!((&nx[0] * &ns[0]).magnitude().unwrap(), b("n"));

    // nothing close to zero: identity
    let x = BanVector::from_reals(&[1.0, 2.0], L);
    let s = BanVector::from_reals(&[3.0, 0.5], L);
    let (nx, ns) = update_zero_entries(&x, &s, &b("1"), 1e-8, 1.0);
    assert_eq!(nx, x);
    assert_eq!(ns, s);
}

#[test]
fn solves_trivial_equality_lp() {
    // min x s.t. x = 1
    let json = r#"{"sense":"minimize","objectives":[{"c":["1"]}],
                   "constraints":[{"a":["1"],"rel":"=","b":"1"}],
                   "bounds":["nonneg"]}"#;
    let emb = embedded(json);
    let r = solve(&emb, &SolverConfig::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!((r.x_original[0].leading_coeff() - 1.0).abs() < 1e-6, "x = {}", r.x_original[0]);
}

#[test]
fn iterate_interiority_holds_throughout() {
    let emb = embedded(crate::fixtures::EXP1);
    let r = solve(&emb, &SolverConfig::default()).unwrap();
    assert_eq!(r.status, SolveStatus::Optimal);
    assert!(r.x.is_strictly_positive());
    assert!(r.s.is_strictly_positive());
}

#[test]
fn mu_magnitude_is_monotone_on_fixtures() {
    for f in crate::fixtures::ALL {
        let emb = embedded(f.json);
        let r = solve(&emb, &SolverConfig::default()).unwrap();
        let powers: Vec<i64> =
            r.trace.iter().map(|rec| rec.mu.magnitude().map_or(i64::MIN, |m| m.power())).collect();
        for w in powers.windows(2) {
            assert!(w[1] <= w[0], "{}: mu magnitude rose: {powers:?}", f.name);
        }
    }
}

#[test]
fn concurrent_solves_share_nothing() {
    let handles: Vec<_> = [crate::fixtures::EXP1, crate::fixtures::EXP3]
        .into_iter()
        .map(|json| {
            std::thread::spawn(move || {
                let emb = embedded(json);
                solve(&emb, &SolverConfig::default()).map(|r| r.status)
            })
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap().unwrap(), SolveStatus::Optimal);
    }
}
