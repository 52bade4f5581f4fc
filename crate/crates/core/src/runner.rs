//! Subcommand dispatch with deterministic JSON and text reports.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;
use serde_json::{json, Value};

use crate::affine_fock::{
    a1_efef, appendix_b_projection, appendix_b_sweep, casimir_identities, trace_decomposition_check, verify_lemma_a1,
};
use crate::classification::{
    enumerate_cd_pairs, min_dimension_by_dual_coxeter, select_deligne_candidates, DEFAULT_LEVEL_CAP, DEFAULT_SCAN_BOUND,
};
use crate::error::{Error, Result};
use crate::lattice_invariants::{
    a2_full_degree3, a2_minus_one_tau_degree3, d4_full_degree4, d4_weyl_degree4, d4_x_subspace_check, invariant_basis,
    invariant_table, lattice_automorphism_group, spans_agree, Lattice, Polynomial, Subgroup,
};
use crate::lie_algebra::{lie_algebra, verify_trace_formulas, TraceCheckConfig, DEFAULT_SEED};
use crate::q_series::{
    class_sn_degree, extended_reference_series, fixed_point_graded_dimension, reference_series, string_function,
    PuiseuxSeries, StringClass,
};
use crate::rational::{fmt_q, parse_q, q, qi, Q};
use crate::root_system::{
    build_root_system, check_rho_monotonicity, enumerate_weyl_group, rho_displacement_census, TypeLabel,
    DEFAULT_WEYL_CAP,
};
use crate::virasoro::{
    casimir_closed_form, casimir_coefficients, check_lowering_relations, descendant_zero_mode_trace_on_primaries,
    gram_determinant_roots, gram_matrix, kappa4_from_translation, no_singular_vectors, spot_central_charges,
    t_relation_holds, VirasoroState,
};

/// Version tag carried by every JSON report.
pub const SCHEMA: &str = "deligne-report/1";

/// Environment variable bounding the number of worker threads used by `run_all`.
pub const WORKERS_ENV: &str = "DELIGNE_WORKERS";

/// Printed `(c, d, h∨/k)` rows of the classification table.
pub const CD_TABLE: [(&str, u64, &str); 21] = [
    ("2/5", 1, "3/2"),
    ("1", 3, "2"),
    ("2", 8, "3"),
    ("14/5", 14, "4"),
    ("4", 28, "6"),
    ("5", 47, "42/5"),
    ("26/5", 52, "9"),
    ("6", 78, "12"),
    ("32/5", 96, "14"),
    ("34/5", 119, "33/2"),
    ("7", 133, "18"),
    ("38/5", 190, "24"),
    ("8", 248, "30"),
    ("41/5", 287, "34"),
    ("42/5", 336, "39"),
    ("44/5", 484, "54"),
    ("9", 603, "66"),
    ("46/5", 782, "84"),
    ("47/5", 1081, "114"),
    ("48/5", 1680, "174"),
    ("49/5", 3479, "354"),
];

/// Printed exceptional rows `(h∨, min dim, type)` of the minimal-dimension table.
pub const MIN_DIM_TABLE: [(usize, usize, &str); 7] =
    [(2, 3, "A1"), (3, 8, "A2"), (4, 14, "G2"), (9, 52, "F4"), (12, 78, "E6"), (18, 133, "E7"), (30, 248, "E8")];

/// Printed level-one selections `(c, type)`.
pub const DELIGNE_TABLE: [(&str, &str); 8] =
    [("1", "A1"), ("2", "A2"), ("14/5", "G2"), ("4", "D4"), ("26/5", "F4"), ("6", "E6"), ("7", "E7"), ("8", "E8")];

/// Printed Weyl censuses `(|ρ-wρ|², ε, count)`.
pub const G2_CENSUS: [(&str, i8, usize); 6] =
    [("0", 1, 1), ("2/3", -1, 1), ("2", -1, 1), ("14/3", 1, 2), ("8", -1, 1), ("32/3", -1, 1)];
pub const G2_CENSUS_BOUND: i64 = 12;
pub const F4_CENSUS: [(&str, i8, usize); 13] = [
    ("0", 1, 1),
    ("1", -1, 2),
    ("2", -1, 2),
    ("3", 1, 5),
    ("4", -1, 1),
    ("5", 1, 2),
    ("5", -1, 2),
    ("6", 1, 3),
    ("7", -1, 4),
    ("8", -1, 2),
    ("9", -1, 4),
    ("9", 1, 1),
    ("10", 1, 2),
];
pub const F4_CENSUS_BOUND: i64 = 10;

/// Printed string-function expansions `(type, class, leading exponent, relative coefficients)`.
pub const STRING_TABLE: [(&str, &str, &str, &[i64]); 4] = [
    ("G2", "short", "11/20", &[1, 3, 9, 21, 48, 99]),
    ("G2", "even", "-7/60", &[1, 2, 6, 14, 32, 66, 135]),
    ("F4", "short", "17/60", &[1, 6, 25, 86, 261]),
    ("F4", "even", "-13/60", &[1, 4, 17, 56, 172, 476]),
];

/// Printed fixed-point series and the class degree they certify.
pub const FIXED_POINT_TABLE: [(&str, &[i64], i64); 2] =
    [("G2", &[1, 0, 1, 1, 2, 2, 5], 5), ("F4", &[1, 0, 1, 1, 2, 2], 5)];

/// Printed class degrees of the simply-laced fixed-point fixtures.
pub const CLASS_DEGREE_TABLE: [(&str, i64); 5] = [("A2", 2), ("D4", 3), ("E6", 4), ("E7", 5), ("E8", 7)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Tables,
    Classify,
    Traces,
    Strings,
    Fixedpoint,
    Invariants,
    Casimir,
    Radical,
    Appendixb,
    Census,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Tables,
        Command::Classify,
        Command::Traces,
        Command::Strings,
        Command::Fixedpoint,
        Command::Invariants,
        Command::Casimir,
        Command::Radical,
        Command::Appendixb,
        Command::Census,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Tables => "tables",
            Command::Classify => "classify",
            Command::Traces => "traces",
            Command::Strings => "strings",
            Command::Fixedpoint => "fixedpoint",
            Command::Invariants => "invariants",
            Command::Casimir => "casimir",
            Command::Radical => "radical",
            Command::Appendixb => "appendixb",
            Command::Census => "census",
        }
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown subcommand `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Flags shared by every subcommand; `None` selects the documented default.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub type_label: Option<TypeLabel>,
    pub order: Option<i64>,
    pub seed: u64,
    pub samples: Option<usize>,
    pub exhaustive: bool,
    pub which: Option<String>,
    pub lattice: Option<Lattice>,
    pub subgroup: Option<Subgroup>,
    pub degree: Option<usize>,
    pub c: Option<Q>,
    pub d: Option<Q>,
    pub n: Option<usize>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            type_label: None,
            order: None,
            seed: DEFAULT_SEED,
            samples: None,
            exhaustive: false,
            which: None,
            lattice: None,
            subgroup: None,
            degree: None,
            c: None,
            d: None,
            n: None,
        }
    }

    pub fn with_type(mut self, t: TypeLabel) -> Self {
        self.type_label = Some(t);
        self
    }

    pub fn with_which(mut self, which: &str) -> Self {
        self.which = Some(which.to_string());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn to_json(&self) -> Value {
        json!({
            "type": self.type_label.map(|t| t.to_string()),
            "order": self.order,
            "seed": self.seed,
            "samples": self.samples,
            "exhaustive": self.exhaustive,
            "which": self.which,
            "lattice": self.lattice.map(|l| l.to_string()),
            "subgroup": self.subgroup.map(|s| s.to_string()),
            "degree": self.degree,
            "c": self.c.as_ref().map(fmt_q),
            "d": self.d.as_ref().map(fmt_q),
            "n": self.n,
        })
    }
}

/// Outcome of one subcommand.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: Command,
    pub title: String,
    pub config: Value,
    pub passed: bool,
    pub first_failure: Option<String>,
    pub data: Value,
    pub lines: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command.name(),
            "title": self.title,
            "config": self.config,
            "passed": self.passed,
            "first_failure": self.first_failure,
            "data": self.data,
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => pretty(&self.to_json()),
            Format::Text => {
                let mut out = format!("[{}] {}\n", status(self.passed), self.title);
                for line in &self.lines {
                    let _ = writeln!(out, "  {line}");
                }
                if let Some(f) = &self.first_failure {
                    let _ = writeln!(out, "  first failure: {f}");
                }
                out
            }
        }
    }
}

fn status(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

/// Collects named assertions and keeps the first failure.
struct Checks {
    failures: Vec<String>,
    lines: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Checks { failures: Vec::new(), lines: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.failures.push(what.clone());
        }
        self.lines.push(format!("{} {what}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn finish(self, command: Command, title: String, config: &RunConfig, data: Value) -> Report {
        Report {
            command,
            title,
            config: config.to_json(),
            passed: self.failures.is_empty(),
            first_failure: self.failures.into_iter().next(),
            data,
            lines: self.lines,
        }
    }
}

fn ty(s: &str) -> TypeLabel {
    s.parse().expect("table type labels parse")
}

fn rational(s: &str) -> Q {
    parse_q(s).expect("table rationals parse")
}

fn require_type(config: &RunConfig, default: TypeLabel) -> Result<TypeLabel> {
    config.type_label.unwrap_or(default).validate()
}

fn which<'a>(config: &'a RunConfig, default: &'a str) -> &'a str {
    config.which.as_deref().unwrap_or(default)
}

fn bad_which(config: &RunConfig, allowed: &str) -> Error {
    Error::InvalidArgument(format!(
        "`{} --which {}` is not available; choose one of {allowed}",
        config.command.name(),
        which(config, "")
    ))
}

/// Dispatches one subcommand.
pub fn run(config: &RunConfig) -> Result<Report> {
    match config.command {
        Command::Tables => run_tables(config),
        Command::Classify => run_classify(config),
        Command::Traces => run_traces(config),
        Command::Strings => run_strings(config),
        Command::Fixedpoint => run_fixedpoint(config),
        Command::Invariants => run_invariants(config),
        Command::Casimir => run_casimir(config),
        Command::Radical => run_radical(config),
        Command::Appendixb => run_appendixb(config),
        Command::Census => run_census(config),
    }
}

fn run_tables(config: &RunConfig) -> Result<Report> {
    let mut checks = Checks::new();
    match which(config, "1") {
        "1" => {
            let pairs = enumerate_cd_pairs(DEFAULT_SCAN_BOUND)?;
            checks.check(pairs.len() == CD_TABLE.len(), format!("{} rows (printed {})", pairs.len(), CD_TABLE.len()));
            for (i, (c, d, r)) in CD_TABLE.iter().enumerate() {
                let ok = pairs.get(i).is_some_and(|p| p.c == rational(c) && p.d == *d && p.ratio == rational(r));
                checks.check(ok, format!("row {}: c = {c}, d = {d}, h∨/k = {r}", i + 1));
            }
            Ok(checks.finish(Command::Tables, "(c, d) candidates with c < 10".into(), config, to_value(&pairs)))
        }
        "2" => {
            let mut rows = Vec::new();
            for (hv, dim, t) in MIN_DIM_TABLE {
                let got = min_dimension_by_dual_coxeter(hv);
                let ok = got.as_ref().is_some_and(|m| m.dim == dim && m.type_label.to_string() == t);
                checks.check(ok, format!("h∨ = {hv}: dim {dim} ({t})"));
                rows.push(got);
            }
            for n in 3..=20usize {
                if n != 5 {
                    let hv = 2 * n - 1;
                    let got = min_dimension_by_dual_coxeter(hv);
                    let ok = got.as_ref().is_some_and(|m| m.dim == 2 * n * n + n && m.type_label == TypeLabel::B(n));
                    checks.check(ok, format!("h∨ = {hv}: 2n²+n = {} (B{n})", 2 * n * n + n));
                    rows.push(got);
                }
                if ![6, 9, 15].contains(&n) {
                    let hv = 2 * n;
                    let got = min_dimension_by_dual_coxeter(hv);
                    let dim = 2 * n * n + 3 * n + 1;
                    let ok = got.as_ref().is_some_and(|m| m.dim == dim && m.type_label == TypeLabel::D(n + 1));
                    checks.check(ok, format!("h∨ = {hv}: 2n²+3n+1 = {dim} (D{})", n + 1));
                    rows.push(got);
                }
            }
            Ok(checks.finish(
                Command::Tables,
                "minimal dimension by dual Coxeter number".into(),
                config,
                to_value(&rows),
            ))
        }
        _ => Err(bad_which(config, "1, 2")),
    }
}

fn run_classify(config: &RunConfig) -> Result<Report> {
    let mut checks = Checks::new();
    let pairs = enumerate_cd_pairs(DEFAULT_SCAN_BOUND)?;
    let sel = select_deligne_candidates(&pairs, DEFAULT_LEVEL_CAP);
    checks.check(
        sel.rows.len() == DELIGNE_TABLE.len(),
        format!("{} selected rows (printed {})", sel.rows.len(), DELIGNE_TABLE.len()),
    );
    for (i, (c, t)) in DELIGNE_TABLE.iter().enumerate() {
        let ok = sel.rows.get(i).is_some_and(|r| r.c == rational(c) && r.type_label == ty(t) && r.level == 1);
        checks.check(ok, format!("c = {c}: {t} at level 1"));
    }
    checks
        .check(sel.exceeding.is_empty(), format!("no dimension exceeds the minimum ({} comparisons)", sel.comparisons));
    Ok(checks.finish(Command::Classify, "level-k selection against minimal dimensions".into(), config, to_value(&sel)))
}

fn run_traces(config: &RunConfig) -> Result<Report> {
    let t = require_type(config, TypeLabel::A(1))?;
    let g = lie_algebra(t)?;
    let mut cfg = TraceCheckConfig::default_for(&g);
    cfg.seed = config.seed;
    if config.exhaustive {
        cfg.exhaustive = true;
    }
    if let Some(s) = config.samples {
        cfg.exhaustive = config.exhaustive;
        cfg.samples = s;
    }
    let traces = verify_trace_formulas(&g, &cfg)?;
    let killing = g.killing_check();
    let mut checks = Checks::new();
    checks.note(format!(
        "dim = {}, h∨ = {}, c = {}, mode = {}",
        g.dim,
        g.dual_coxeter,
        fmt_q(&g.central_charge_level1),
        traces.mode
    ));
    checks.check(
        traces.passed,
        format!(
            "trace formulae: {} order-2, {} order-3, {} order-4 tuples",
            traces.order2_checked, traces.order3_checked, traces.order4_checked
        ),
    );
    checks.check(
        traces.passed,
        format!(
            "{} reversal, {} cyclic, {} odd-vanishing checks",
            traces.reversal_checked, traces.cyclic_checked, traces.odd_vanishing_checked
        ),
    );
    if let Some(ce) = &traces.counterexample {
        checks.note(format!("counterexample: {ce}"));
    }
    checks.check(killing.passed, format!("Tr ad(x)ad(y) = 2h∨φ(x,y) on {} basis pairs", killing.pairs_checked));
    let data = json!({ "traces": to_value(&traces), "killing": to_value(&killing) });
    Ok(checks.finish(Command::Traces, format!("adjoint trace identities for {t}"), config, data))
}

type CensusRows = &'static [(&'static str, i8, usize)];

fn printed_census(t: TypeLabel) -> Option<(CensusRows, i64)> {
    match t {
        TypeLabel::G2 => Some((&G2_CENSUS, G2_CENSUS_BOUND)),
        TypeLabel::F4 => Some((&F4_CENSUS, F4_CENSUS_BOUND)),
        _ => None,
    }
}

fn run_census(config: &RunConfig) -> Result<Report> {
    let t = require_type(config, TypeLabel::G2)?;
    let rs = build_root_system(t)?;
    let w = enumerate_weyl_group(&rs, DEFAULT_WEYL_CAP)?;
    let printed = printed_census(t);
    let bound = config.order.map(qi).or_else(|| printed.map(|(_, b)| qi(b)));
    let census = rho_displacement_census(&rs, &w, bound.as_ref());
    let mono = check_rho_monotonicity(&rs, &w);
    let mut checks = Checks::new();
    checks.note(format!("|W| = {}, bound = {}", w.len(), bound.as_ref().map_or("none".into(), fmt_q)));
    for cell in &census.cells {
        checks.note(format!("({}, {:+}) : {}", fmt_q(&cell.norm), cell.sign, cell.count));
    }
    if let Some((cells, b)) = printed {
        if bound.as_ref() == Some(&qi(b)) {
            checks.check(
                census.cells.len() == cells.len(),
                format!("{} cells (printed {})", census.cells.len(), cells.len()),
            );
            for (norm, sign, count) in cells {
                let got = census.count(&rational(norm), *sign);
                checks.check(got == *count, format!("({norm}, {sign:+}) : computed {got}, printed {count}"));
            }
        }
    }
    checks.check(mono.passed, format!("ρ-displacement monotonicity on {} elements", mono.elements_checked));
    let data = json!({ "census": to_value(&census), "monotonicity": to_value(&mono) });
    Ok(checks.finish(Command::Census, format!("Weyl census of |ρ-wρ|² for {t}"), config, data))
}

fn relative_coefficients(s: &PuiseuxSeries, lead: &Q, count: usize) -> Vec<Q> {
    (0..count).map(|k| s.coefficient(&(lead + qi(k as i64)))).collect()
}

fn run_strings(config: &RunConfig) -> Result<Report> {
    let t = require_type(config, TypeLabel::G2)?;
    let order = config.order.unwrap_or(7);
    let mut checks = Checks::new();
    let mut data = serde_json::Map::new();
    let classes: &[StringClass] =
        if t.is_simply_laced() { &[StringClass::Even] } else { &[StringClass::Even, StringClass::Short] };
    for &class in classes {
        let s = string_function(t, class, order)?;
        let name = to_value(&class).as_str().unwrap_or_default().to_string();
        checks.note(format!("{name}: {s}"));
        for (pt, pc, lead, coeffs) in STRING_TABLE {
            if ty(pt) != t || pc != name {
                continue;
            }
            let lead = rational(lead);
            checks.check(s.valuation() == Some(&lead), format!("{name} leading exponent {}", fmt_q(&lead)));
            let n = coeffs.len().min(order.max(0) as usize);
            let got = relative_coefficients(&s, &lead, n);
            let want: Vec<Q> = coeffs[..n].iter().map(|&x| qi(x)).collect();
            checks.check(got == want, format!("{name} coefficients {:?}", &coeffs[..n]));
        }
        data.insert(name, to_value(&s));
    }
    Ok(checks.finish(Command::Strings, format!("level-one string functions for {t}"), config, Value::Object(data)))
}

fn integer_prefix(s: &PuiseuxSeries, n: usize) -> Vec<Q> {
    (0..n).map(|k| s.coefficient(&qi(k as i64))).collect()
}

fn run_fixedpoint(config: &RunConfig) -> Result<Report> {
    let t = require_type(config, TypeLabel::G2)?;
    let order = config.order.unwrap_or(7);
    let fp = fixed_point_graded_dimension(t, order)?;
    let degree = class_sn_degree(&fp.series)?;
    let mut checks = Checks::new();
    checks.note(format!("series = {}", fp.series));
    checks.note(format!(
        "class degree = {}{}",
        degree.degree,
        if degree.truncation_limited { " (limited by truncation)" } else { "" }
    ));
    let mut data = json!({ "fixed_point": to_value(&fp), "class_degree": to_value(&degree) });
    for (pt, coeffs, deg) in FIXED_POINT_TABLE {
        if ty(pt) != t {
            continue;
        }
        let n = coeffs.len().min(order.max(0) as usize);
        let want: Vec<Q> = coeffs[..n].iter().map(|&x| qi(x)).collect();
        checks.check(integer_prefix(&fp.series, n) == want, format!("printed series {:?} mod q^{n}", &coeffs[..n]));
        if order as usize >= coeffs.len() {
            checks.check(degree.degree == deg, format!("class degree {deg}"));
        }
    }
    if t.is_simply_laced() {
        let fixture = reference_series(t)?;
        let common = fixture.truncation().clone().min(qi(order));
        let agree = fp.series.truncate(&common) == fixture.truncate(&common);
        checks.check(agree, format!("agrees with the printed fixture below q^{}", fmt_q(&common)));
        if !agree {
            checks.note(format!("normalization discrepancy: fixture {fixture}"));
        }
        data["fixture"] = to_value(&fixture);
    }
    Ok(checks.finish(Command::Fixedpoint, format!("fixed-point graded dimension for {t}"), config, data))
}

fn printed_spans(lattice: Lattice, subgroup: Subgroup) -> Vec<(usize, &'static str, Vec<Polynomial>)> {
    match (lattice, subgroup) {
        (Lattice::A2, Subgroup::MinusOneTau) => vec![(3, "⟨-1, τ⟩ cubics", a2_minus_one_tau_degree3())],
        (Lattice::A2, Subgroup::Full) => vec![(3, "Aut cubics", a2_full_degree3())],
        (Lattice::D4, Subgroup::Weyl) => vec![(4, "W quartics", d4_weyl_degree4())],
        (Lattice::D4, Subgroup::Full) => vec![(4, "Aut quartics", d4_full_degree4())],
        _ => Vec::new(),
    }
}

fn run_invariants(config: &RunConfig) -> Result<Report> {
    let lattice = config.lattice.unwrap_or(Lattice::D4);
    let subgroup = config.subgroup.unwrap_or(Subgroup::Full);
    let degree = config.degree.unwrap_or(5);
    let table = invariant_table(lattice, subgroup, degree)?;
    let mut checks = Checks::new();
    checks.note(format!("|G| = {}", table.order));
    checks.note(format!("Molien   {:?}", table.molien));
    checks.note(format!("Reynolds {:?}", table.reynolds));
    checks.check(table.agree, format!("Reynolds rank equals Molien dimension in degrees ≤ {degree}"));
    let mut data = json!({ "table": to_value(&table) });
    let group = lattice_automorphism_group(lattice, subgroup)?;
    for (deg, name, printed) in printed_spans(lattice, subgroup) {
        if deg <= degree {
            let basis = invariant_basis(&group, deg)?;
            let ok = spans_agree(&basis.space, &basis.vectors, &printed)?;
            checks.check(ok, format!("printed {name} span the degree-{deg} invariants"));
        }
    }
    if lattice == Lattice::D4 && subgroup == Subgroup::Full && degree >= 5 {
        let x = d4_x_subspace_check()?;
        checks.check(
            x.h_stable && x.inside_weyl_invariants && x.meets_full_invariants_trivially,
            "X is H-stable, W-invariant and meets the Aut-invariants trivially",
        );
        checks.check(
            x.bookkeeping_degree4 && x.fixture_plus_one,
            format!(
                "degree 4: {} = {} + {} and fixture {}",
                x.weyl_degree4, x.full_degree4, x.dim_x, x.fixture_degree4
            ),
        );
        checks.check(
            x.bookkeeping_degree5,
            format!("degree 5: {} + {} = {} (fixture)", x.vomega_degree5, x.translated_dim, x.fixture_degree5),
        );
        checks.check(x.passed, "X-subspace check");
        data["x_subspace"] = to_value(&x);
    }
    Ok(checks.finish(Command::Invariants, format!("polynomial invariants of {subgroup} on {lattice}"), config, data))
}

fn state_json(s: &VirasoroState) -> Value {
    to_value(s)
}

fn casimir_cases() -> Vec<(Q, Q)> {
    let mut cases: Vec<(Q, Q)> = CD_TABLE.iter().map(|(c, d, _)| (rational(c), qi(*d as i64))).collect();
    for c in spot_central_charges() {
        cases.push((c, q(3, 2)));
    }
    cases
}

fn run_casimir(config: &RunConfig) -> Result<Report> {
    let mut checks = Checks::new();
    match which(config, "coefficients") {
        "coefficients" => {
            let n_max = config.n.unwrap_or(4);
            let cases = match (&config.c, &config.d) {
                (Some(c), Some(d)) => vec![(c.clone(), d.clone())],
                (None, None) => casimir_cases(),
                _ => return Err(Error::InvalidArgument("--c and --d must be given together".into())),
            };
            let mut rows = Vec::new();
            for (c, d) in &cases {
                let mut row = serde_json::Map::new();
                row.insert("c".into(), json!(fmt_q(c)));
                row.insert("d".into(), json!(fmt_q(d)));
                for n in 2..=n_max {
                    let solved = casimir_coefficients(c, d, n)?;
                    let lowering = check_lowering_relations(&solved, d, n)?;
                    checks.check(
                        lowering,
                        format!("c = {}, d = {}: κ{n} satisfies L(m)κ{n} = {}κ{n}₋ₘ", fmt_q(c), fmt_q(d), n - 1),
                    );
                    if n <= 4 {
                        let closed = casimir_closed_form(c, d, n)?;
                        checks.check(solved == closed, format!("c = {}, d = {}: κ{n} = {solved}", fmt_q(c), fmt_q(d)));
                    }
                    row.insert(format!("kappa{n}"), state_json(&solved));
                }
                if n_max >= 4 {
                    checks.check(kappa4_from_translation(c, d)?, format!("c = {}: κ4 = X4 T²ω + Y4 ω₍₋₁₎ω", fmt_q(c)));
                }
                rows.push(Value::Object(row));
            }
            Ok(checks.finish(
                Command::Casimir,
                "Casimir coefficients in the Virasoro vacuum module".into(),
                config,
                json!(rows),
            ))
        }
        "singular" => {
            let top = config.n.unwrap_or(6);
            let mut roots = Vec::new();
            for degree in 2..=top {
                let r = gram_determinant_roots(degree)?;
                checks.check(
                    r.only_degenerate_roots(),
                    format!("degree {degree}: determinant vanishes only at degenerate c"),
                );
                roots.push(to_value(&r));
            }
            let zero = gram_matrix(4, &q(-22, 5))?.determinant();
            checks.check(zero == qi(0), "degree-4 Gram is singular at c = -22/5");
            for degree in [2, 3] {
                let det = gram_matrix(degree, &qi(0))?.determinant();
                checks.check(det == qi(0), format!("degree-{degree} Gram is singular at c = 0"));
            }
            let rejected = matches!(casimir_coefficients(&q(-22, 5), &qi(1), 4), Err(Error::SingularVirasoro { .. }));
            checks.check(rejected, "κ4 at c = -22/5 is rejected as singular");
            let mut hypotheses = Vec::new();
            for (c, _, _) in CD_TABLE {
                let h = no_singular_vectors(&rational(c), top)?;
                checks.check(h.agree && h.gram_nonsingular, format!("c = {c}: no singular vectors in degrees ≤ {top}"));
                hypotheses.push(to_value(&h));
            }
            checks.check(t_relation_holds(&q(1, 2)), "T²ω = 2L(-4)𝟙");
            let data = json!({ "determinants": roots, "hypotheses": hypotheses });
            Ok(checks.finish(Command::Casimir, "singular central charges of the vacuum Gram".into(), config, data))
        }
        _ => Err(bad_which(config, "coefficients, singular")),
    }
}

fn run_radical(config: &RunConfig) -> Result<Report> {
    let t = require_type(config, TypeLabel::A(1))?;
    let g = lie_algebra(t)?;
    let mut checks = Checks::new();
    match which(config, "identities") {
        "identities" => {
            let ids = casimir_identities(&g)?;
            checks.check(ids.kappa1_zero, "κ1 = 0");
            checks.check(ids.kappa2, "κ2 = (2d/c)ω");
            checks.check(ids.kappa3, "κ3 = (d/c)Tω");
            checks.check(ids.degree1_gram_is_form && ids.degree1_radical_zero, "degree-1 Gram is the invariant form");
            checks.check(
                ids.kappa4.in_radical,
                format!(
                    "κ4 - (X4 T²ω + Y4 ω₍₋₁₎ω) lies in the radical of the {}-dimensional degree-4 Gram",
                    ids.degree4_basis_size
                ),
            );
            Ok(checks.finish(
                Command::Radical,
                format!("Casimir identities in the universal module for {t}"),
                config,
                to_value(&ids),
            ))
        }
        "commutator" => {
            let samples = config.samples.unwrap_or(60);
            let r = verify_lemma_a1(&g, samples, config.seed);
            checks.check(
                r.passed == r.samples,
                format!("x₍q₎a₍0₎ identity on {}/{} sampled states", r.passed, r.samples),
            );
            if let Some(f) = &r.first_failure {
                checks.note(format!("counterexample: {f}"));
            }
            Ok(checks.finish(Command::Radical, format!("zero-mode commutator identity for {t}"), config, to_value(&r)))
        }
        _ => Err(bad_which(config, "identities, commutator")),
    }
}

fn run_appendixb(config: &RunConfig) -> Result<Report> {
    let t = require_type(config, TypeLabel::A(1))?;
    let g = lie_algebra(t)?;
    let samples = config.samples.unwrap_or(10);
    let mut checks = Checks::new();
    let mut data = serde_json::Map::new();
    let d = qi(g.dim as i64);
    let c = g.central_charge_level1.clone();
    let three_d = qi(3) * &d;
    for parts in [&[4][..], &[2, 2][..]] {
        let state = VirasoroState::monomial(&c, parts, qi(1));
        let tr = descendant_zero_mode_trace_on_primaries(&state, &d)?;
        checks.check(
            tr == three_d,
            format!("zero-mode trace of L{parts:?}𝟙 = {} (3d = {})", fmt_q(&tr), fmt_q(&three_d)),
        );
    }
    if t == TypeLabel::A(1) {
        let a = a1_efef(&g);
        let b = appendix_b_projection(&g, &a)?;
        checks.check(b.matches, format!("(e,f,e,f): P = {}, Q = {}, S = {}", fmt_q(&b.p), fmt_q(&b.q), fmt_q(&b.s)));
        checks.check(
            b.z1 == q(-2, 3) && b.z2 == q(16, 9),
            format!("(e,f,e,f): Z1 = {}, Z2 = {}", fmt_q(&b.z1), fmt_q(&b.z2)),
        );
        let tdc = trace_decomposition_check(&g, &a)?;
        checks.check(
            tdc.cd1 && tdc.design && tdc.recombined,
            format!("(e,f,e,f): Tr ad = {} balances", fmt_q(&tdc.trace_ad)),
        );
        data.insert("efef_projection".into(), to_value(&b));
        data.insert("efef_traces".into(), to_value(&tdc));
    }
    let sweep = appendix_b_sweep(&g, samples, config.seed)?;
    checks.check(
        sweep.projection_matches == samples,
        format!("projection closed form on {}/{samples} samples", sweep.projection_matches),
    );
    checks.check(
        sweep.cd1_balanced == samples,
        format!("trace decomposition on {}/{samples} samples", sweep.cd1_balanced),
    );
    checks.check(
        sweep.design_holds == samples,
        format!("Tr v₍3₎ = 3d(Z1+Z2) on {}/{samples} samples", sweep.design_holds),
    );
    checks.check(
        sweep.recombined == samples,
        format!("recombined trace identity on {}/{samples} samples", sweep.recombined),
    );
    data.insert("sweep".into(), to_value(&sweep));
    Ok(checks.finish(
        Command::Appendixb,
        format!("quartic projection and zero-mode traces for {t}"),
        config,
        Value::Object(data),
    ))
}

/// One line of the `--all` scoreboard.
#[derive(Clone, Debug, Serialize)]
pub struct ScoreLine {
    pub section: String,
    pub command: String,
    pub passed: bool,
}

/// Result of the full suite.
#[derive(Clone, Debug)]
pub struct Suite {
    pub seed: u64,
    pub scoreboard: Vec<ScoreLine>,
    pub reports: Vec<Report>,
}

impl Suite {
    pub fn passed(&self) -> bool {
        self.scoreboard.iter().all(|l| l.passed)
    }

    pub fn to_json(&self) -> Value {
        let first = self.reports.iter().find_map(|r| r.first_failure.as_ref().map(|f| format!("{}: {f}", r.title)));
        json!({
            "schema": SCHEMA,
            "command": "all",
            "seed": self.seed,
            "passed": self.passed(),
            "first_failure": first,
            "scoreboard": to_value(&self.scoreboard),
            "reports": self.reports.iter().map(Report::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => pretty(&self.to_json()),
            Format::Text => {
                let mut out = String::new();
                for r in &self.reports {
                    out.push_str(&r.render(Format::Text));
                }
                out.push_str("\nscoreboard\n");
                for l in &self.scoreboard {
                    let _ = writeln!(out, "  [{}] {:<34} {}", status(l.passed), l.section, l.command);
                }
                out
            }
        }
    }
}

/// The jobs of the full suite in dependency order, labelled by scoreboard section.
pub fn suite_jobs(seed: u64) -> Vec<(&'static str, String, RunConfig)> {
    let mut jobs = Vec::new();
    let mut push = |section: &'static str, config: RunConfig| {
        let label = describe(&config);
        jobs.push((section, label, config.with_seed(seed)));
    };
    push("(c, d) candidates", RunConfig::new(Command::Tables).with_which("1"));
    push("minimal dimensions", RunConfig::new(Command::Tables).with_which("2"));
    push("level-one selection", RunConfig::new(Command::Classify));
    for t in TypeLabel::DELIGNE {
        push("adjoint trace identities", RunConfig::new(Command::Traces).with_type(t));
    }
    for t in [TypeLabel::G2, TypeLabel::F4] {
        push("Weyl censuses", RunConfig::new(Command::Census).with_type(t));
    }
    for t in [TypeLabel::G2, TypeLabel::F4] {
        let mut cfg = RunConfig::new(Command::Strings).with_type(t);
        cfg.order = Some(7);
        push("string functions", cfg);
    }
    for (t, order) in [(TypeLabel::G2, 7), (TypeLabel::F4, 6)] {
        let mut cfg = RunConfig::new(Command::Fixedpoint).with_type(t);
        cfg.order = Some(order);
        push("fixed-point series", cfg);
    }
    for t in [TypeLabel::A(1), TypeLabel::A(2), TypeLabel::D(4), TypeLabel::E6, TypeLabel::E7, TypeLabel::E8] {
        let mut cfg = RunConfig::new(Command::Fixedpoint).with_type(t);
        cfg.order = Some(9);
        push("simply-laced fixed points", cfg);
    }
    for (l, s) in [
        (Lattice::A2, Subgroup::Full),
        (Lattice::A2, Subgroup::MinusOneTau),
        (Lattice::D4, Subgroup::Weyl),
        (Lattice::D4, Subgroup::Full),
    ] {
        let mut cfg = RunConfig::new(Command::Invariants);
        cfg.lattice = Some(l);
        cfg.subgroup = Some(s);
        cfg.degree = Some(5);
        push("lattice invariants", cfg);
    }
    push("Casimir coefficients", RunConfig::new(Command::Casimir).with_which("coefficients"));
    push("singular central charges", RunConfig::new(Command::Casimir).with_which("singular"));
    push("affine radical", RunConfig::new(Command::Radical).with_type(TypeLabel::A(1)).with_which("identities"));
    for t in [TypeLabel::A(1), TypeLabel::A(2)] {
        push("zero-mode commutator", RunConfig::new(Command::Radical).with_type(t).with_which("commutator"));
    }
    for t in [TypeLabel::A(1), TypeLabel::A(2)] {
        push("quartic projection", RunConfig::new(Command::Appendixb).with_type(t));
    }
    jobs
}

/// Command line equivalent of a configuration.
pub fn describe(config: &RunConfig) -> String {
    let mut s = config.command.name().to_string();
    if let Some(w) = &config.which {
        let _ = write!(s, " --which {w}");
    }
    if let Some(t) = config.type_label {
        let _ = write!(s, " --type {t}");
    }
    if let Some(o) = config.order {
        let _ = write!(s, " --order {o}");
    }
    if let Some(l) = config.lattice {
        let _ = write!(s, " --lattice {l}");
    }
    if let Some(g) = config.subgroup {
        let _ = write!(s, " --subgroup {g}");
    }
    if let Some(d) = config.degree {
        let _ = write!(s, " --degree {d}");
    }
    s
}

fn worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn failed_report(config: &RunConfig, err: &Error) -> Report {
    Report {
        command: config.command,
        title: describe(config),
        config: config.to_json(),
        passed: false,
        first_failure: Some(err.to_string()),
        data: Value::Null,
        lines: Vec::new(),
    }
}

/// Runs the full suite; jobs run on worker threads and are assembled in job order.
pub fn run_all(seed: u64) -> Suite {
    let jobs = suite_jobs(seed);
    let slots: Vec<Mutex<Option<Report>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = worker_count().min(jobs.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some((_, _, config)) = jobs.get(i) else { break };
                let report = run(config).unwrap_or_else(|e| failed_report(config, &e));
                *slots[i].lock().expect("slot lock") = Some(report);
            });
        }
    });
    let reports: Vec<Report> =
        slots.into_iter().map(|m| m.into_inner().expect("slot lock").expect("every job ran")).collect();
    let scoreboard = jobs
        .iter()
        .zip(&reports)
        .map(|((section, label, _), r)| ScoreLine {
            section: section.to_string(),
            command: label.clone(),
            passed: r.passed,
        })
        .collect();
    Suite { seed, scoreboard, reports }
}

/// Class degrees of the printed simply-laced fixtures, with `E8` continued by computation.
pub fn fixture_class_degrees() -> Result<Vec<(TypeLabel, i64, bool)>> {
    CLASS_DEGREE_TABLE
        .iter()
        .map(|(t, _)| {
            let t = ty(t);
            let s = if t == TypeLabel::E8 { extended_reference_series(t, 9)? } else { reference_series(t)? };
            let d = class_sn_degree(&s)?;
            Ok((t, d.degree, d.truncation_limited))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_names_round_trip() {
        for c in Command::ALL {
            assert_eq!(c.name().parse::<Command>().unwrap(), c);
        }
        assert!("nope".parse::<Command>().is_err());
    }

    #[test]
    fn table_one_report() {
        let r = run(&RunConfig::new(Command::Tables).with_which("1")).unwrap();
        assert!(r.passed, "{:?}", r.first_failure);
        assert_eq!(r.data.as_array().unwrap().len(), 21);
        assert_eq!(r.data[0]["c"], "2/5");
    }

    #[test]
    fn exhaustive_a1_traces() {
        let mut cfg = RunConfig::new(Command::Traces).with_type(TypeLabel::A(1));
        cfg.exhaustive = true;
        let r = run(&cfg).unwrap();
        assert!(r.passed);
        assert_eq!(r.data["traces"]["order4_checked"], 81);
    }

    #[test]
    fn g2_fixed_point_report() {
        let mut cfg = RunConfig::new(Command::Fixedpoint).with_type(TypeLabel::G2);
        cfg.order = Some(7);
        let r = run(&cfg).unwrap();
        assert!(r.passed, "{:?}", r.first_failure);
        assert_eq!(r.data["class_degree"]["degree"], 5);
    }

    #[test]
    fn unknown_which_is_rejected() {
        assert!(run(&RunConfig::new(Command::Tables).with_which("9")).is_err());
    }

    #[test]
    fn identical_configs_render_identically() {
        let cfg = RunConfig::new(Command::Appendixb).with_type(TypeLabel::A(1));
        let a = run(&cfg).unwrap().render(Format::Json);
        let b = run(&cfg).unwrap().render(Format::Json);
        assert_eq!(a, b);
    }
}
