fn main() {
    for f in naqp::fixtures::ALL {
        let lp = naqp::model::ProblemFile::from_json(f.json).unwrap().to_lex_problem(5).unwrap();
        let std = naqp::model::to_standard_form(&lp).unwrap();
        let (w1, w2) = naqp::model::estimate_weights(&std);
        let emb = naqp::model::embed(&std, w1, w2);
        let cfg = naqp::solver::SolverConfig::default();
        match naqp::solver::solve(&emb, &cfg) {
            Ok(r) => {
                let xs: Vec<String> = r.x_original.iter().map(|e| format!("{e}")).collect();
                println!("{}: {:?} iters={} x=({}) f={} levels={:?}", f.name, r.status, r.iterations, xs.join(", "), r.objective, r.objective_levels);
                let stair: Vec<i64> = r.trace.iter().filter_map(|t| t.mu.magnitude().ok().map(|m| m.power())).collect();
                println!("   mu powers: {stair:?}");
                if f.name.contains("unbounded") || f.name.contains("infeasible") {
                    println!("   lambda_orig={}", r.lambda_original);
                    println!("   x_emb={}", r.x);
                }
            }
            Err(e) => println!("{}: ERROR {e}", f.name),
        }
    }
}
