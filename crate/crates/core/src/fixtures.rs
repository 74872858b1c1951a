//! Bundled benchmark problems, shipped in original (pre-embedding) form so
//! every run exercises the full scalarize → standard form → embed pipeline.

/// Two-objective LP: maximize (8x₁+12x₂, then 14x₁+10x₂) over a polygon.
pub const EXP1: &str = include_str!("../fixtures/exp1.json");
/// Unbounded LP in equality form; the embedding makes the ray readable.
pub const EXP2_UNBOUNDED: &str = include_str!("../fixtures/exp2_unbounded.json");
/// Infeasible twin of the unbounded problem.
pub const EXP2_INFEASIBLE: &str = include_str!("../fixtures/exp2_infeasible.json");
/// Two-objective QP over a pyramid: quadratic distance cost, then linear.
pub const EXP3: &str = include_str!("../fixtures/exp3.json");
/// Three-objective QP: linear, then two quadratic penalties.
pub const EXP4: &str = include_str!("../fixtures/exp4.json");

/// A named fixture.
#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub json: &'static str,
}

/// All bundled problem fixtures in benchmark order.
pub const ALL: &[Fixture] = &[
    Fixture { name: "exp1", json: EXP1 },
    Fixture { name: "exp2_unbounded", json: EXP2_UNBOUNDED },
    Fixture { name: "exp2_infeasible", json: EXP2_INFEASIBLE },
    Fixture { name: "exp3", json: EXP3 },
    Fixture { name: "exp4", json: EXP4 },
];

pub fn by_name(name: &str) -> Option<&'static Fixture> {
    ALL.iter().find(|f| f.name == name)
}
