//! Problem representations and transformations.
//!
//! A [`LexProblem`] holds prioritized objectives over linear constraints.
//! The pipeline turns it into a single-objective problem over truncated
//! Euclidean numbers ([`scalarize_lex`]), normalizes to equality standard
//! form `min ½xᵀQx + cᵀx, Ax = b, x ≥ 0` ([`to_standard_form`]), and
//! enlarges it with one artificial variable, one slack and one bounding row
//! so that the enlarged problem is always strictly feasible and bounded
//! ([`embed`]). The penalty weights of the embedding are infinite monosemia
//! sized by [`estimate_weights`].

use std::error::Error;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ban::{Ban, ParseError};
use crate::linalg::{BanMatrix, BanVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarBound {
    NonNegative,
    Free,
}

/// One prioritized objective `½xᵀQx + cᵀx` (Q absent for linear objectives).
#[derive(Debug, Clone)]
pub struct Objective {
    pub q: Option<BanMatrix>,
    pub c: BanVector,
}

/// One linear constraint `aᵀx ⟨rel⟩ b`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub a: BanVector,
    pub rel: Relation,
    pub b: Ban,
}

/// A prioritized list of objectives with linear constraints; priority is the
/// list order (first objective dominates).
#[derive(Debug, Clone)]
pub struct LexProblem {
    pub sense: Sense,
    pub objectives: Vec<Objective>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBound>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    EmptyObjectives,
    EmptyConstraints,
    ZeroRow { row: usize },
    /// More priority levels than monosemium slots; lower priorities would be
    /// unrepresentable. Raise the configured BAN length.
    ObjectivesExceedLength { objectives: usize, len: usize },
    AsymmetricQ { objective: usize },
    Dimension { what: String },
    BanLiteral { context: String, error: ParseError },
    File(String),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::EmptyObjectives => write!(f, "problem has no objectives"),
            ModelError::EmptyConstraints => write!(f, "problem has no constraints"),
            ModelError::ZeroRow { row } => {
                write!(f, "constraint row {row} has all-zero coefficients")
            }
            ModelError::ObjectivesExceedLength { objectives, len } => write!(
                f,
                "{objectives} priority levels cannot be represented with BAN length {len}; \
                 rerun with --ban-len {objectives} or larger"
            ),
            ModelError::AsymmetricQ { objective } => {
                write!(f, "quadratic term of objective {objective} is not symmetric")
            }
            ModelError::Dimension { what } => write!(f, "inconsistent dimensions: {what}"),
            ModelError::BanLiteral { context, error } => {
                write!(f, "bad BAN literal in {context}: {error}")
            }
            ModelError::File(msg) => write!(f, "problem file: {msg}"),
        }
    }
}

impl Error for ModelError {}

impl LexProblem {
    pub fn num_vars(&self) -> usize {
        self.bounds.len()
    }

    pub fn ban_len(&self) -> usize {
        self.objectives[0].c.ban_len()
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.objectives.is_empty() {
            return Err(ModelError::EmptyObjectives);
        }
        if self.constraints.is_empty() {
            return Err(ModelError::EmptyConstraints);
        }
        let n = self.num_vars();
        for (k, obj) in self.objectives.iter().enumerate() {
            if obj.c.dim() != n {
                return Err(ModelError::Dimension {
                    what: format!("objective {k} has {} cost entries, expected {n}", obj.c.dim()),
                });
            }
            if let Some(q) = &obj.q {
                if q.rows() != n || q.cols() != n {
                    return Err(ModelError::Dimension {
                        what: format!(
                            "objective {k} Q is {}x{}, expected {n}x{n}",
                            q.rows(),
                            q.cols()
                        ),
                    });
                }
                if !q.is_symmetric() {
                    return Err(ModelError::AsymmetricQ { objective: k });
                }
            }
        }
        for (i, row) in self.constraints.iter().enumerate() {
            if row.a.dim() != n {
                return Err(ModelError::Dimension {
                    what: format!("constraint {i} has {} coefficients, expected {n}", row.a.dim()),
                });
            }
            if row.a.iter().all(|c| c.is_zero()) {
                return Err(ModelError::ZeroRow { row: i });
            }
        }
        Ok(())
    }

    /// True when every datum is a plain real (the problem is standard before
    /// scalarization introduces infinitesimal weights).
    pub fn is_standard(&self) -> bool {
        let finite = |b: &Ban| b.is_zero() || (b.power() == 0 && b.lead_mon() == *b);
        self.objectives.iter().all(|o| {
            o.c.iter().all(finite)
                && o.q
                    .as_ref()
                    .map_or(true, |q| (0..q.rows()).all(|i| (0..q.cols()).all(|j| finite(&q[(i, j)]))))
        }) && self.constraints.iter().all(|r| r.a.iter().all(finite) && finite(&r.b))
    }
}

/// Collapses the prioritized objectives into one cost with weights
/// `βₖ = α^{1−k}`, converting maximization to minimization. Returns the
/// scalarized `(Q, c)` in minimization orientation.
pub fn scalarize_lex(p: &LexProblem) -> Result<(BanMatrix, BanVector), ModelError> {
    p.validate()?;
    let len = p.ban_len();
    let n = p.num_vars();
    if p.objectives.len() > len {
        return Err(ModelError::ObjectivesExceedLength { objectives: p.objectives.len(), len });
    }
    let mut q = BanMatrix::zeros(n, n, len);
    let mut c = BanVector::zeros(n, len);
    for (k, obj) in p.objectives.iter().enumerate() {
        let shift = -(k as i64); // weight α^{1−k} for the k-th priority, 1-based
        c = c.add(&obj.c.map(|e| e.mul_alpha_pow(shift)));
        if let Some(qk) = &obj.q {
            q = q.add(&qk.scale(&Ban::monosemium(1.0, shift, len)));
        }
    }
    if p.sense == Sense::Maximize {
        q = q.neg();
        c = c.neg();
    }
    Ok((q, c))
}

/// How one original variable is recovered from standard-form columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarRecovery {
    Column(usize),
    Split { plus: usize, minus: usize },
}

/// Column roles of the standard-form (and embedded) problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnRole {
    Original,
    SplitPlus,
    SplitMinus,
    Slack,
    Surplus,
    Artificial,
    BoundSlack,
}

/// Metadata carried alongside the standard-form problem so that solutions
/// can be reported in original coordinates.
#[derive(Debug, Clone)]
pub struct ProblemMeta {
    pub var_map: Vec<VarRecovery>,
    pub roles: Vec<ColumnRole>,
    pub col_names: Vec<String>,
    pub priority_levels: usize,
    /// Scalarized objective on original coordinates (minimization sign),
    /// used for reporting `f(x)` per priority level.
    pub report_q: BanMatrix,
    pub report_c: BanVector,
    pub was_max: bool,
    /// All input data was real-valued before scalarization.
    pub standard_input: bool,
}

/// Standard-form problem `min ½xᵀQx + cᵀx  s.t.  Ax = b, x ≥ 0`.
#[derive(Debug, Clone)]
pub struct Naqp {
    pub q: BanMatrix,
    pub c: BanVector,
    pub a: BanMatrix,
    pub b: BanVector,
    pub meta: ProblemMeta,
}

impl Naqp {
    pub fn num_vars(&self) -> usize {
        self.a.cols()
    }

    pub fn num_rows(&self) -> usize {
        self.a.rows()
    }

    pub fn ban_len(&self) -> usize {
        self.c.ban_len()
    }

    /// Cost in the orientation the problem was stated in; the embedding
    /// builds its bounding row from this.
    fn native_cost(&self) -> BanVector {
        if self.meta.was_max {
            self.c.neg()
        } else {
            self.c.clone()
        }
    }

    fn native_q(&self) -> BanMatrix {
        if self.meta.was_max {
            self.q.neg()
        } else {
            self.q.clone()
        }
    }

    /// Restricts a standard-form point to original coordinates
    /// (split variables recombined, slack and artificial columns dropped).
    pub fn recover_original(&self, x: &BanVector) -> BanVector {
        BanVector::new(
            self.meta
                .var_map
                .iter()
                .map(|rec| match rec {
                    VarRecovery::Column(j) => x[*j].clone(),
                    VarRecovery::Split { plus, minus } => &x[*plus] - &x[*minus],
                })
                .collect(),
        )
    }

    /// Scalarized objective (minimization sign) at a point in original
    /// coordinates.
    pub fn objective_at(&self, x_orig: &BanVector) -> Ban {
        let qx = self.meta.report_q.mat_vec(x_orig);
        x_orig.dot(&qx).scale(0.5) + self.meta.report_c.dot(x_orig)
    }
}

/// Rewrites a lexicographic problem in equality standard form: `≤` rows gain
/// a slack, `≥` rows a surplus, free variables split as `x = x⁺ − x⁻`, and
/// the scalarized cost is mapped onto the widened column space.
pub fn to_standard_form(p: &LexProblem) -> Result<Naqp, ModelError> {
    let (q_orig, c_orig) = scalarize_lex(p)?;
    let len = p.ban_len();
    let n_orig = p.num_vars();

    // exact duplicate rows would defeat the full-row-rank assumption
    let mut rows: Vec<&Constraint> = Vec::new();
    for row in &p.constraints {
        let dup = rows.iter().any(|r| {
            r.rel == row.rel && r.b == row.b && r.a.iter().zip(row.a.iter()).all(|(x, y)| x == y)
        });
        if !dup {
            rows.push(row);
        }
    }

    let mut var_map = Vec::with_capacity(n_orig);
    let mut roles = Vec::new();
    let mut col_names = Vec::new();
    for (i, bound) in p.bounds.iter().enumerate() {
        match bound {
            VarBound::NonNegative => {
                var_map.push(VarRecovery::Column(roles.len()));
                roles.push(ColumnRole::Original);
                col_names.push(format!("x{}", i + 1));
            }
            VarBound::Free => {
                let plus = roles.len();
                var_map.push(VarRecovery::Split { plus, minus: plus + 1 });
                roles.push(ColumnRole::SplitPlus);
                roles.push(ColumnRole::SplitMinus);
                col_names.push(format!("x{}+", i + 1));
                col_names.push(format!("x{}-", i + 1));
            }
        }
    }
    let n_vars = roles.len();
    let m = rows.len();
    let extra: usize = rows.iter().filter(|r| r.rel != Relation::Eq).count();
    let n = n_vars + extra;

    let mut a = BanMatrix::zeros(m, n, len);
    let mut b = BanVector::zeros(m, len);
    let mut next_slack = n_vars;
    for (i, row) in rows.iter().enumerate() {
        for (orig, rec) in var_map.iter().enumerate() {
            match rec {
                VarRecovery::Column(j) => a[(i, *j)] = row.a[orig].clone(),
                VarRecovery::Split { plus, minus } => {
                    a[(i, *plus)] = row.a[orig].clone();
                    a[(i, *minus)] = -&row.a[orig];
                }
            }
        }
        b[i] = row.b.clone();
        match row.rel {
            Relation::Eq => {}
            Relation::Le => {
                a[(i, next_slack)] = Ban::real(1.0, len);
                roles.push(ColumnRole::Slack);
                col_names.push(format!("s{}", i + 1));
                next_slack += 1;
            }
            Relation::Ge => {
                a[(i, next_slack)] = Ban::real(-1.0, len);
                roles.push(ColumnRole::Surplus);
                col_names.push(format!("s{}", i + 1));
                next_slack += 1;
            }
        }
    }

    // widen the scalarized cost onto the split/slacked column space
    let mut q = BanMatrix::zeros(n, n, len);
    let mut c = BanVector::zeros(n, len);
    let signed_cols = |rec: &VarRecovery| -> Vec<(usize, f64)> {
        match rec {
            VarRecovery::Column(j) => vec![(*j, 1.0)],
            VarRecovery::Split { plus, minus } => vec![(*plus, 1.0), (*minus, -1.0)],
        }
    };
    for (i, rec_i) in var_map.iter().enumerate() {
        for (col, sign) in signed_cols(rec_i) {
            c[col] = c_orig[i].scale(sign);
        }
        for (j, rec_j) in var_map.iter().enumerate() {
            if q_orig[(i, j)].is_zero() {
                continue;
            }
            for (ci, si) in signed_cols(rec_i) {
                for (cj, sj) in signed_cols(rec_j) {
                    q[(ci, cj)] = q_orig[(i, j)].scale(si * sj);
                }
            }
        }
    }

    Ok(Naqp {
        q,
        c,
        a,
        b,
        meta: ProblemMeta {
            var_map,
            roles,
            col_names,
            priority_levels: p.objectives.len(),
            report_q: q_orig,
            report_c: c_orig,
            was_max: p.sense == Sense::Maximize,
            standard_input: p.is_standard(),
        },
    })
}

/// The standard-form problem enlarged with one primal artificial variable,
/// one slack and one bounding row, plus the infinite penalty weights.
#[derive(Debug, Clone)]
pub struct EmbeddedNaqp {
    pub problem: Naqp,
    /// ℘₁: sets the bounding-row right-hand side `−℘₁`.
    pub weight_primal: Ban,
    /// ℘₂: cost of the primal artificial variable.
    pub weight_dual: Ban,
    pub artificial_col: usize,
    pub slack_col: usize,
    pub bound_row: usize,
    pub source_cols: usize,
    pub source_rows: usize,
}

/// Estimates the order of magnitude of the penalty weights from the problem
/// data and returns them as pure monosemia with coefficient 1.
///
/// `O(℘₂) = O(α·min_{j∈J} O(b_j)/o([A_j, (b−A𝟙)_j]))` with `J = {j : b_j ≠ 0}`,
/// falling back to `α` when `J` is empty; the same ratio also bounds the
/// magnitude of any primal solution, `O(x̃)`.
///
/// ℘₁ must dominate the bounding row evaluated at a solution,
/// `℘₁ > (cᵀ−𝟙ᵀ+𝟙ᵀQ)x̄`, so `O(℘₁) = O(α · O(cᵀ−𝟙ᵀ+𝟙ᵀQ) · O(x̃))`.
pub fn estimate_weights(p: &Naqp) -> (Ban, Ban) {
    let len = p.ban_len();
    let (m, n) = (p.num_rows(), p.num_vars());
    let c_nat = p.native_cost();
    let q_nat = p.native_q();
    let ones = BanVector::ones(n, len);
    let b_minus_a1 = p.b.sub(&p.a.mat_vec(&ones));

    // O(x̃) = min_j O(b_j)/o([A_j, (b−A𝟙)_j]); 1 when b = 0
    let mut x_bound_power: Option<i64> = None;
    for j in 0..m {
        if p.b[j].is_zero() {
            continue;
        }
        let num = p.b[j].magnitude().expect("nonzero").power();
        let mut row = p.a.row(j);
        row.push(b_minus_a1[j].clone());
        let den = row.smallest_order().expect("row checked nonzero").power();
        let ratio = num - den;
        x_bound_power = Some(match x_bound_power {
            Some(w) => w.min(ratio),
            None => ratio,
        });
    }
    let x_bound_power = x_bound_power.unwrap_or(0);
    let w2 = Ban::monosemium(1.0, 1 + x_bound_power, len);

    // bounding row cᵀ − 𝟙ᵀ + 𝟙ᵀQ in the native orientation
    let q1 = q_nat.mat_vec(&ones);
    let one = Ban::real(1.0, len);
    let row = BanVector::new(
        (0..n).map(|i| &c_nat[i] - &one + &q1[i]).collect::<Vec<_>>(),
    );
    let row_power = row.magnitude().map_or(0, |m| m.power());
    let w1 = Ban::monosemium(1.0, 1 + row_power + x_bound_power, len);
    (w1, w2)
}

/// Enlarges a standard-form problem so that it is strictly feasible and
/// bounded:
///
/// ```text
///     Ã = [ A            b−A𝟙   0 ]     b̃ = [ b  ]     c̃ = [ c  ]
///         [ cᵀ−𝟙ᵀ+𝟙ᵀQ      0   −1 ]         [ −℘₁]         [ ℘₂ ]
///                                                          [ 0  ]
/// ```
///
/// The bounding row is built from the cost in the problem's native
/// orientation, matching how the enlarged benchmark problems are stated.
pub fn embed(p: &Naqp, weight_primal: Ban, weight_dual: Ban) -> EmbeddedNaqp {
    let len = p.ban_len();
    let (m, n) = (p.num_rows(), p.num_vars());
    let ones = BanVector::ones(n, len);
    let b_minus_a1 = p.b.sub(&p.a.mat_vec(&ones));
    let c_nat = p.native_cost();
    let q_nat = p.native_q();
    let q1 = q_nat.mat_vec(&ones);

    let mut a = BanMatrix::zeros(m + 1, n + 2, len);
    for i in 0..m {
        for j in 0..n {
            a[(i, j)] = p.a[(i, j)].clone();
        }
        a[(i, n)] = b_minus_a1[i].clone();
    }
    for j in 0..n {
        a[(m, j)] = &c_nat[j] - Ban::real(1.0, len) + &q1[j];
    }
    a[(m, n + 1)] = Ban::real(-1.0, len);

    let mut b = p.b.clone();
    b.push(-&weight_primal);

    let mut c = p.c.clone();
    c.push(weight_dual.clone());
    c.push(Ban::zero(len));

    let mut q = BanMatrix::zeros(n + 2, n + 2, len);
    for i in 0..n {
        for j in 0..n {
            q[(i, j)] = p.q[(i, j)].clone();
        }
    }

    let mut meta = p.meta.clone();
    meta.roles.push(ColumnRole::Artificial);
    meta.roles.push(ColumnRole::BoundSlack);
    meta.col_names.push("art".into());
    meta.col_names.push("bnd".into());

    EmbeddedNaqp {
        problem: Naqp { q, c, a, b, meta },
        weight_primal,
        weight_dual,
        artificial_col: n,
        slack_col: n + 1,
        bound_row: m,
        source_cols: n,
        source_rows: m,
    }
}

impl EmbeddedNaqp {
    /// The interior point `x = 𝟙` padded with artificial value 1 and the
    /// slack induced by the bounding row; strictly feasible by construction.
    pub fn canonical_interior_point(&self) -> BanVector {
        let len = self.problem.ban_len();
        let n = self.source_cols;
        let mut x = BanVector::ones(n + 1, len);
        // bounding row: rᵀ(x, art) − slack = −℘₁
        let mut r = BanVector::zeros(n + 1, len);
        for j in 0..=n {
            r[j] = self.problem.a[(self.bound_row, j)].clone();
        }
        let slack = r.dot(&x) + &self.weight_primal;
        x.push(slack);
        x
    }

    /// Drops the artificial and slack coordinates of an embedded point.
    pub fn strip(&self, x: &BanVector) -> BanVector {
        BanVector::new(x.entries()[..self.source_cols].to_vec())
    }
}

// ---------------------------------------------------------------------------
// Problem file format (JSON with BAN-literal payloads)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    pub sense: String,
    pub objectives: Vec<ObjectiveFile>,
    pub constraints: Vec<ConstraintFile>,
    pub bounds: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObjectiveFile {
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<String>>>,
    pub c: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstraintFile {
    pub a: Vec<String>,
    pub rel: String,
    pub b: String,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::File(e.to_string()))
    }

    pub fn to_lex_problem(&self, ban_len: usize) -> Result<LexProblem, ModelError> {
        let sense = match self.sense.as_str() {
            "minimize" | "min" => Sense::Minimize,
            "maximize" | "max" => Sense::Maximize,
            other => return Err(ModelError::File(format!("unknown sense '{other}'"))),
        };
        let lit = |s: &str, ctx: String| {
            Ban::parse(s, ban_len).map_err(|error| ModelError::BanLiteral { context: ctx, error })
        };
        let mut objectives = Vec::new();
        for (k, obj) in self.objectives.iter().enumerate() {
            let c = BanVector::new(
                obj.c
                    .iter()
                    .enumerate()
                    .map(|(i, s)| lit(s, format!("objective {k} c[{i}]")))
                    .collect::<Result<_, _>>()?,
            );
            let q = match &obj.q {
                None => None,
                Some(rows) => {
                    let mut parsed = Vec::new();
                    for (i, row) in rows.iter().enumerate() {
                        parsed.push(
                            row.iter()
                                .enumerate()
                                .map(|(j, s)| lit(s, format!("objective {k} Q[{i}][{j}]")))
                                .collect::<Result<Vec<_>, _>>()?,
                        );
                    }
                    Some(BanMatrix::from_rows(parsed))
                }
            };
            objectives.push(Objective { q, c });
        }
        let mut constraints = Vec::new();
        for (i, row) in self.constraints.iter().enumerate() {
            let a = BanVector::new(
                row.a
                    .iter()
                    .enumerate()
                    .map(|(j, s)| lit(s, format!("constraint {i} a[{j}]")))
                    .collect::<Result<_, _>>()?,
            );
            let rel = match row.rel.as_str() {
                "<=" => Relation::Le,
                "=" => Relation::Eq,
                ">=" => Relation::Ge,
                other => {
                    return Err(ModelError::File(format!(
                        "constraint {i}: unknown relation '{other}'"
                    )))
                }
            };
            let b = lit(&row.b, format!("constraint {i} b"))?;
            constraints.push(Constraint { a, rel, b });
        }
        let bounds = self
            .bounds
            .iter()
            .enumerate()
            .map(|(i, s)| match s.as_str() {
                "nonneg" => Ok(VarBound::NonNegative),
                "free" => Ok(VarBound::Free),
                other => Err(ModelError::File(format!("bound {i}: unknown kind '{other}'"))),
            })
            .collect::<Result<_, _>>()?;
        let p = LexProblem { sense, objectives, constraints, bounds };
        p.validate()?;
        Ok(p)
    }
}
