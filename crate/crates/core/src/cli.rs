//! Command-line front end. Every invocation prints one JSON document
//! `{command, parameters, results, status}` (or a plain table with `--table`)
//! and exits with 0 on success, 1 on a verification mismatch and 2 on a usage
//! or input error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bundles::{
    check_git_factorization, degree_vector, factorization_mismatch, fcurve_degree, verify_main_theorem,
    BundleFamily,
};
use crate::covers::{cut_labels_match_rule, degenerate, genus, CoverSpec};
use crate::invariants::{
    enumerate_tableaux, is_semistable, verify_restriction_theorem, BlockShape, PointConfiguration,
};
use crate::strata::{enumerate_boundary_cuts, enumerate_fcurves, induce_four_weights, SetPartition4};
use crate::weights::{phi_rule, psi_rule, Linearization, WeightVector};
use crate::Error;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "DIVFACT_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "divfact", version, about = "Degrees of weighted factorization systems on M_{0,n}-bar")]
pub struct Cli {
    /// Print a plain-text table instead of JSON.
    #[arg(long, global = true)]
    pub table: bool,

    /// Number of worker threads (defaults to the machine's parallelism).
    #[arg(long, global = true, env = WORKERS_ENV)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree of one bundle on one F-curve.
    Degree(DegreeArgs),
    /// Degrees on every F-curve, for one family or all three.
    Degvec(DegvecArgs),
    /// Compare the three families for every admissible weight vector.
    VerifyMain(VerifyMainArgs),
    /// Check the factorization rules along boundary divisors.
    FactorCheck(FactorCheckArgs),
    /// Genus of a cyclic cover, optionally with its degeneration data.
    Cover(CoverArgs),
    /// Enumerate a tableau basis, optionally verifying its restriction.
    Tableaux(TableauxArgs),
    /// Stability of a point configuration.
    Semistable(SemistableArgs),
}

#[derive(Debug, Args)]
pub struct DegreeArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: BundleFamily,
    #[arg(long)]
    pub r: u32,
    #[arg(long, value_parser = parse_u32_list)]
    pub weights: U32List,
    #[arg(long, value_parser = parse_partition)]
    pub partition: SetPartition4,
}

#[derive(Debug, Args)]
pub struct DegvecArgs {
    /// Omit to compare all three families.
    #[arg(long, value_parser = parse_family)]
    pub family: Option<BundleFamily>,
    #[arg(long)]
    pub r: u32,
    #[arg(long, value_parser = parse_u32_list)]
    pub weights: U32List,
}

#[derive(Debug, Args)]
pub struct VerifyMainArgs {
    #[arg(long)]
    pub r: u32,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct FactorCheckArgs {
    #[arg(long)]
    pub r: u32,
    #[arg(long, value_parser = parse_u32_list)]
    pub weights: U32List,
    /// One side of a single cut, e.g. `1,2`; omit to check every cut.
    #[arg(long, value_parser = parse_u32_list)]
    pub subset: Option<U32List>,
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    #[arg(long)]
    pub r: u32,
    #[arg(long, value_parser = parse_u32_list)]
    pub weights: U32List,
    /// Degenerate along the cut separating the first `split` points.
    #[arg(long)]
    pub split: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TableauxArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_parser = parse_u32_list)]
    pub content: U32List,
    /// Points on the first factor; enables the restriction check.
    #[arg(long, requires = "d1")]
    pub n1: Option<usize>,
    /// Dimension of the first factor.
    #[arg(long, requires = "n1")]
    pub d1: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SemistableArgs {
    #[arg(long)]
    pub d: usize,
    /// Rational weights summing to `d + 1`, e.g. `1/2,1/2,1/2,1/2`.
    #[arg(long, value_parser = parse_rational_list)]
    pub weights: RationalList,
    /// Homogeneous coordinates, points separated by `;`, e.g. `1,0;0,1;1,1`.
    #[arg(long, value_parser = parse_points)]
    pub points: PointList,
}

/// Newtypes so that clap treats each list as a single value.
#[derive(Debug, Clone)]
pub struct U32List(pub Vec<u32>);
#[derive(Debug, Clone)]
pub struct RationalList(pub Vec<BigRational>);
#[derive(Debug, Clone)]
pub struct PointList(pub Vec<Vec<BigRational>>);

fn strip(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn parse_family(s: &str) -> Result<BundleFamily, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_partition(s: &str) -> Result<SetPartition4, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_u32_list(s: &str) -> Result<U32List, String> {
    let s = strip(s);
    if s.is_empty() {
        return Err("empty list".into());
    }
    s.split(',')
        .map(|x| x.parse::<u32>().map_err(|_| format!("bad integer {x:?}")))
        .collect::<Result<_, _>>()
        .map(U32List)
}

fn parse_rational(x: &str) -> Result<BigRational, String> {
    let bad = || format!("bad rational {x:?}");
    let (num, den) = match x.split_once('/') {
        Some((a, b)) => (a, b),
        None => (x, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

fn parse_rational_list(s: &str) -> Result<RationalList, String> {
    let s = strip(s);
    if s.is_empty() {
        return Err("empty list".into());
    }
    s.split(',').map(parse_rational).collect::<Result<_, _>>().map(RationalList)
}

fn parse_points(s: &str) -> Result<PointList, String> {
    let s = strip(s);
    if s.is_empty() {
        return Err("empty point list".into());
    }
    s.split(';')
        .map(|p| p.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()
        .map(PointList)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Mismatch,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => EXIT_OK,
            Status::Mismatch => EXIT_MISMATCH,
            Status::Error => EXIT_USAGE,
        }
    }
}

/// The single output document of an invocation. `serde_json` maps keep their
/// keys sorted, so serialization is deterministic.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: Vec<Value>,
    pub status: Status,
}

impl Report {
    fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            results: Vec::new(),
            status: Status::Ok,
        }
    }

    fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters
            .insert(key.to_string(), serde_json::to_value(value).expect("serializable parameter"));
    }

    fn push(&mut self, record: impl Serialize) {
        self.results.push(serde_json::to_value(record).expect("serializable record"));
    }

    fn flag(&mut self, ok: bool) {
        if !ok {
            self.status = Status::Mismatch;
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for (k, v) in &self.parameters {
            out.push_str(&format!("  {k} = {}\n", plain(v)));
        }
        for record in &self.results {
            match record {
                Value::Object(map) => {
                    let cells: Vec<String> = map.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect();
                    out.push_str(&cells.join("  "));
                }
                other => out.push_str(&plain(other)),
            }
            out.push('\n');
        }
        out.push_str(&format!("status: {}\n", plain(&json!(self.status))));
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn fmt_list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn admissible_weights(r: u32, weights: &[u32]) -> crate::Result<WeightVector> {
    if r < 2 {
        return Err(Error::Precondition(format!("need r >= 2, got {r}")));
    }
    let c = WeightVector::new(r, weights.to_vec())?;
    if !c.is_admissible() {
        return Err(Error::NotDivisible { sum: c.sum(), r });
    }
    Ok(c)
}

fn cmd_degree(a: &DegreeArgs) -> crate::Result<Report> {
    let mut report = Report::new("degree");
    report.param("family", a.family);
    report.param("r", a.r);
    report.param("weights", fmt_list(&a.weights.0));
    report.param("partition", a.partition.to_string());
    let c = admissible_weights(a.r, &a.weights.0)?;
    if a.partition.n() != c.len() {
        return Err(Error::LengthMismatch {
            expected: c.len(),
            actual: a.partition.n(),
        });
    }
    let degree = fcurve_degree(a.family, &c, &a.partition)?;
    let four = induce_four_weights(&c, &a.partition)?;
    report.push(json!({
        "degree": degree,
        "four_weights": four.entries(),
        "partition": a.partition.to_string(),
    }));
    Ok(report)
}

fn cmd_degvec(a: &DegvecArgs) -> crate::Result<Report> {
    let mut report = Report::new("degvec");
    report.param("r", a.r);
    report.param("weights", fmt_list(&a.weights.0));
    let c = admissible_weights(a.r, &a.weights.0)?;
    if c.len() < 4 {
        return Err(Error::Precondition(format!("need n >= 4, got {}", c.len())));
    }
    match a.family {
        Some(fam) => {
            report.param("family", fam);
            let v = degree_vector(fam, &c)?;
            for (p, d) in v.iter() {
                report.push(json!({ "partition": p.to_string(), "degree": d }));
            }
        }
        None => {
            let vectors = BundleFamily::ALL
                .iter()
                .map(|&fam| degree_vector(fam, &c))
                .collect::<crate::Result<Vec<_>>>()?;
            for p in enumerate_fcurves(c.len()) {
                let [cb, git, cyc] = [0, 1, 2].map(|i| vectors[i].get(&p).expect("every F-curve has a degree"));
                report.flag(cb == git && git == cyc);
                report.push(json!({ "partition": p.to_string(), "cb": cb, "git": git, "cyc": cyc }));
            }
        }
    }
    Ok(report)
}

fn cmd_verify_main(a: &VerifyMainArgs, timing: &mut Option<f64>) -> crate::Result<Report> {
    let mut report = Report::new("verify-main");
    report.param("r", a.r);
    report.param("n", a.n);
    let start = Instant::now();
    let result = verify_main_theorem(a.r, a.n)?;
    *timing = Some(start.elapsed().as_secs_f64());
    report.flag(result.is_ok());
    report.push(json!({
        "vectors_checked": result.vectors_checked,
        "fcurves_per_vector": result.fcurves_per_vector,
        "mismatches": result.mismatches.len(),
        "first_counterexample": result.mismatches.first(),
    }));
    Ok(report)
}

fn cmd_factor_check(a: &FactorCheckArgs) -> crate::Result<Report> {
    let mut report = Report::new("factor-check");
    report.param("r", a.r);
    report.param("weights", fmt_list(&a.weights.0));
    let c = admissible_weights(a.r, &a.weights.0)?;
    let n = c.len();
    let cuts: Vec<Vec<usize>> = match &a.subset {
        Some(s) => {
            report.param("subset", fmt_list(&s.0));
            vec![s.0.iter().map(|&i| i as usize).collect()]
        }
        None => enumerate_boundary_cuts(n).iter().map(|b| b.subset().to_vec()).collect(),
    };
    let spec = CoverSpec::new(c.clone())?;
    for subset in cuts {
        let phi = phi_rule(&c, &subset)?;
        let psi = psi_rule(&c, &subset)?;
        let git = check_git_factorization(&c, &subset)?;
        let labels = cut_labels_match_rule(&spec, &subset)?;
        let mut families = BTreeMap::new();
        for fam in BundleFamily::ALL {
            let consistent = factorization_mismatch(fam, &c, &subset)?.is_none();
            report.flag(consistent);
            families.insert(fam.name(), consistent);
        }
        report.flag(git && labels);
        report.push(json!({
            "subset": fmt_list(&subset),
            "phi": phi.entries(),
            "psi": psi.entries(),
            "git_consistent": git,
            "labels_consistent": labels,
            "degrees_consistent": families,
        }));
    }
    Ok(report)
}

fn cmd_cover(a: &CoverArgs) -> crate::Result<Report> {
    let mut report = Report::new("cover");
    report.param("r", a.r);
    report.param("weights", fmt_list(&a.weights.0));
    let spec = CoverSpec::new(admissible_weights(a.r, &a.weights.0)?)?;
    match a.split {
        None => {
            let g = genus(&spec)?;
            report.push(json!({ "genus": g.genus, "connected": g.connected }));
        }
        Some(n1) => {
            report.param("split", n1);
            match degenerate(&spec, n1) {
                Ok(data) => report.push(json!({
                    "c_prime": data.c_prime.entries(),
                    "c_double_prime": data.c_double_prime.entries(),
                    "s": data.s,
                    "g": data.g,
                    "g1": data.g1,
                    "g2": data.g2,
                    "additive": true,
                })),
                Err(Error::GenusAdditivity { g, g1, g2, s }) => {
                    report.flag(false);
                    report.push(json!({ "g": g, "g1": g1, "g2": g2, "s": s, "additive": false }));
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(report)
}

fn cmd_tableaux(a: &TableauxArgs) -> crate::Result<Report> {
    let mut report = Report::new("tableaux");
    report.param("d", a.d);
    report.param("k", a.k);
    report.param("content", fmt_list(&a.content.0));
    let content: Vec<usize> = a.content.0.iter().map(|&x| x as usize).collect();
    let basis = enumerate_tableaux(a.d, a.k, &content)?;
    let listed: Vec<String> = basis.iter().map(|t| t.to_string()).collect();
    report.push(json!({ "count": basis.len(), "tableaux": listed }));

    if let (Some(n1), Some(d1)) = (a.n1, a.d1) {
        report.param("n1", n1);
        report.param("d1", d1);
        let n = content.len();
        if a.k == 0 || d1 >= a.d || n1 >= n {
            return Err(Error::InvalidSplit(format!(
                "need k >= 1, d1 < d = {} and n1 < n = {n}",
                a.d
            )));
        }
        let shape = BlockShape::new(d1, a.d - d1, n1, n - n1)?;
        let entries = content
            .iter()
            .map(|&x| BigRational::new(BigInt::from(x), BigInt::from(a.k)))
            .collect();
        let c = Linearization::new(entries, a.d as u32)?;
        let verified = verify_restriction_theorem(shape, &c, a.k as u64)?;
        report.flag(verified.is_ok());
        report.push(&verified);
    }
    Ok(report)
}

fn cmd_semistable(a: &SemistableArgs) -> crate::Result<Report> {
    let mut report = Report::new("semistable");
    report.param("d", a.d);
    report.param("weights", fmt_list(&a.weights.0));
    let points: Vec<String> = a.points.0.iter().map(|p| fmt_list(p)).collect();
    report.param("points", points.join(";"));
    if a.d == 0 {
        return Err(Error::Precondition("need d >= 1".into()));
    }
    let c = Linearization::new(a.weights.0.clone(), a.d as u32)?;
    let cfg = PointConfiguration::new(a.d, a.points.0.clone())?;
    let stability = is_semistable(&cfg, &c)?;
    report.push(json!({ "stability": stability }));
    Ok(report)
}

fn execute(command: &Command, timing: &mut Option<f64>) -> (Report, Option<String>) {
    let (name, result) = match command {
        Command::Degree(a) => ("degree", cmd_degree(a)),
        Command::Degvec(a) => ("degvec", cmd_degvec(a)),
        Command::VerifyMain(a) => ("verify-main", cmd_verify_main(a, timing)),
        Command::FactorCheck(a) => ("factor-check", cmd_factor_check(a)),
        Command::Cover(a) => ("cover", cmd_cover(a)),
        Command::Tableaux(a) => ("tableaux", cmd_tableaux(a)),
        Command::Semistable(a) => ("semistable", cmd_semistable(a)),
    };
    match result {
        Ok(report) => (report, None),
        Err(e) => {
            let mut report = Report::new(name);
            report.status = Status::Error;
            report.push(json!({ "error": e.to_string() }));
            (report, Some(e.to_string()))
        }
    }
}

/// Parses `args`, runs the command and writes the report. Returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            let _ = writeln!(err, "error: --workers must be at least 1");
            return EXIT_USAGE;
        }
        builder = builder.num_threads(w);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return EXIT_USAGE;
        }
    };

    let mut timing = None;
    let (report, message) = pool.install(|| execute(&cli.command, &mut timing));
    let rendered = if cli.table { report.to_table() } else { report.to_json() + "\n" };
    let _ = write!(out, "{rendered}");
    if let Some(m) = message {
        let _ = writeln!(err, "error: {m}");
    }
    if let Some(t) = timing {
        let _ = writeln!(err, "wall time: {t:.3}s");
    }
    report.status.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_disjoint() {
        assert_eq!(Status::Ok.exit_code(), 0);
        assert_eq!(Status::Mismatch.exit_code(), 1);
        assert_eq!(Status::Error.exit_code(), 2);
    }

    #[test]
    fn mismatch_flag_sticks() {
        let mut report = Report::new("x");
        report.flag(true);
        assert_eq!(report.status, Status::Ok);
        report.flag(false);
        report.flag(true);
        assert_eq!(report.status, Status::Mismatch);
        assert!(report.to_json().contains("\"status\": \"mismatch\""));
    }

    #[test]
    fn list_parsers() {
        assert_eq!(parse_u32_list(" 1, 2 ,3").unwrap().0, vec![1, 2, 3]);
        assert!(parse_u32_list("1,,2").is_err());
        assert!(parse_u32_list("").is_err());
        let q = parse_rational_list("1/2, 3").unwrap().0;
        assert_eq!(q[0], BigRational::new(1.into(), 2.into()));
        assert!(parse_rational_list("1/0").is_err());
        assert_eq!(parse_points("1,0; 0,1").unwrap().0.len(), 2);
    }
}
