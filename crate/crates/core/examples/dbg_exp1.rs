// temporary debug driver
fn main() {
    let lp = naqp::model::ProblemFile::from_json(naqp::fixtures::EXP3)
        .unwrap()
        .to_lex_problem(5)
        .unwrap();
    let std = naqp::model::to_standard_form(&lp).unwrap();
    let (w1, w2) = naqp::model::estimate_weights(&std);
    println!("w1={w1} w2={w2}");
    let emb = naqp::model::embed(&std, w1, w2);
    let cfg = naqp::solver::SolverConfig::default();
    let r = naqp::solver::solve(&emb, &cfg).unwrap();
    {
        use naqp::solver::{residuals_and_mu, convergence_measures, level_span};
        let p = &emb.problem;
        let (rb, rc, _rmu, mu) = residuals_and_mu(&p.a, &p.b, &p.c, &p.q, &r.x, &r.lambda, &r.s);
        let rho = convergence_measures(&p.b, &p.c, &p.q, &r.x, &rb, &rc, &mu);
        println!("levels: l1={} l2={} l3={}", level_span(&p.b), level_span(&p.c), p.meta.priority_levels);
        println!("rho1={}\nrho2={}\nrho3={}", rho.0, rho.1, rho.2);
        println!("r_c={rc}");
        println!("s={}", r.s);
        println!("lambda={}", r.lambda);
    }
    println!("status: {:?} iters {}", r.status, r.iterations);
    for rec in &r.trace {
        println!("it {:2}  mu={}  x=({}, {})  f={}", rec.iter, rec.mu, rec.x_original[0], rec.x_original[1], rec.objective);
    }
}
