//! Stable text formats for curves, catalogs, sweeps, and scenarios.
//!
//! Every writer here emits deterministic bytes: floats are rendered with a
//! fixed significant-digit count by [`fmt_sig`], rows are LF-terminated, and
//! each parser accepts exactly the shape its paired writer produces. Parsing
//! one of our own files and re-emitting it therefore reproduces it
//! byte-for-byte, which the test suites rely on for checksum regressions.
//!
//! JSON documents are handled by serde with struct-order fields and
//! shortest-round-trip floats, so the same parse/re-emit identity holds
//! without any formatting code on our side.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    critical_purity, envelope, BoundCurve, Criterion, CriticalPurity, GridPoint, LossRegime,
};
use crate::error::{Error, Result};
use crate::geometry::MeasurementSet;
use crate::simulator::{Scenario, SimulationReport};
use crate::strategies::EnsembleCatalog;

/// Significant digits used for every float column in CSV artifacts.
pub const CSV_SIG_DIGITS: usize = 12;

/// Post-selected linear and root-variance deterministic bounds closer than
/// this are flagged as coincident in comparison tables.
pub const COINCIDENCE_TOL: f64 = 1e-9;

/// Hard cap on the number of points an efficiency grid spec may expand to.
pub const MAX_GRID_POINTS: usize = 1_000_000;

// ---------------------------------------------------------------------------
// Number formatting.
// ---------------------------------------------------------------------------

/// Render `x` in plain decimal with exactly `sig` significant digits.
///
/// The formatting is idempotent: parsing the output as `f64` and formatting
/// it again yields the same bytes, because the parsed value sits far closer
/// to the printed decimal than the rounding granularity. Exact zeros render
/// as `"0"` regardless of sign.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    assert!(sig >= 1, "need at least one significant digit");
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    // The exponential formatter performs the significant-digit rounding and
    // reports the post-rounding exponent, so decimal-boundary carries
    // (0.0999... -> 0.100...) come out right without special cases.
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponential format");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    debug_assert_eq!(digits.len(), sig);
    // Position of the decimal point measured in digits from the left.
    let point = exp + 1;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..(-point) {
            out.push('0');
        }
        out.push_str(&digits);
    } else if point as usize >= digits.len() {
        out.push_str(&digits);
        for _ in 0..(point as usize - digits.len()) {
            out.push('0');
        }
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    out
}

fn csv_float(x: f64) -> String {
    fmt_sig(x, CSV_SIG_DIGITS)
}

// ---------------------------------------------------------------------------
// Efficiency grid specifications.
// ---------------------------------------------------------------------------

/// An inclusive arithmetic efficiency grid, parsed from `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    /// Parse and validate a `start:stop:step` grid description.
    pub fn parse(text: &str) -> Result<GridSpec> {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::parse(
                "grid spec",
                format!("expected start:stop:step, got {text:?}"),
            ));
        }
        let mut fields = [0.0f64; 3];
        for (slot, part) in fields.iter_mut().zip(&parts) {
            *slot = part
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::parse("grid spec", format!("{part:?} is not a number")))?;
        }
        let [start, stop, step] = fields;
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::parse(
                "grid spec",
                "fields must be finite".to_string(),
            ));
        }
        if !(start > 0.0 && stop <= 1.0 && start <= stop) {
            return Err(Error::InvalidGrid(format!(
                "need 0 < start <= stop <= 1, got start={start} stop={stop}"
            )));
        }
        if step <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "step must be positive, got {step}"
            )));
        }
        let count = ((stop - start) / step).floor() as usize + 1;
        if count > MAX_GRID_POINTS {
            return Err(Error::InvalidGrid(format!(
                "spec expands to about {count} points; the limit is {MAX_GRID_POINTS}"
            )));
        }
        Ok(GridSpec { start, stop, step })
    }

    /// Expand to the grid points `start + k*step`, inclusive of `stop` up to
    /// a relative half-ulp tolerance; the endpoint snaps to `stop` exactly.
    pub fn points(&self) -> Vec<f64> {
        let mut points = Vec::new();
        for k in 0.. {
            let mut e = self.start + k as f64 * self.step;
            if (e - self.stop).abs() <= self.step * 1e-9 {
                e = self.stop;
            }
            if e > self.stop {
                break;
            }
            points.push(e);
        }
        points
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GridSpec::parse(s)
    }
}

// ---------------------------------------------------------------------------
// Shared CSV plumbing.
// ---------------------------------------------------------------------------

fn check_no_carriage_returns(what: &'static str, text: &str) -> Result<()> {
    if text.contains('\r') {
        return Err(Error::parse(
            what,
            "carriage returns are not part of this format; expected LF line endings".to_string(),
        ));
    }
    Ok(())
}

fn field_f64(what: &'static str, line_no: usize, field: &str) -> Result<f64> {
    let value: f64 = field
        .parse()
        .map_err(|_| Error::parse(what, format!("line {line_no}: {field:?} is not a number")))?;
    if !value.is_finite() {
        return Err(Error::parse(
            what,
            format!("line {line_no}: {field:?} is not finite"),
        ));
    }
    Ok(value)
}

fn field_usize(what: &'static str, line_no: usize, field: &str) -> Result<usize> {
    field
        .parse()
        .map_err(|_| Error::parse(what, format!("line {line_no}: {field:?} is not a count")))
}

fn field_bool(what: &'static str, line_no: usize, field: &str) -> Result<bool> {
    match field {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(Error::parse(
            what,
            format!("line {line_no}: expected true or false, got {other:?}"),
        )),
    }
}

fn expect_columns<'a>(
    what: &'static str,
    line_no: usize,
    line: &'a str,
    want: usize,
) -> Result<Vec<&'a str>> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != want {
        return Err(Error::parse(
            what,
            format!(
                "line {line_no}: expected {want} fields, got {}",
                fields.len()
            ),
        ));
    }
    Ok(fields)
}

fn parse_meta_line(
    what: &'static str,
    line: Option<&str>,
    with_criterion: bool,
) -> Result<(usize, Option<Criterion>)> {
    let line = line.ok_or_else(|| Error::parse(what, "file is empty".to_string()))?;
    let rest = line
        .strip_prefix("# n=")
        .ok_or_else(|| Error::parse(what, format!("expected \"# n=...\" first, got {line:?}")))?;
    if with_criterion {
        let (n_text, criterion_text) = rest.split_once(" criterion=").ok_or_else(|| {
            Error::parse(what, format!("expected \" criterion=...\" in {line:?}"))
        })?;
        let n = field_usize(what, 1, n_text)?;
        Ok((n, Some(criterion_text.parse()?)))
    } else {
        Ok((field_usize(what, 1, rest)?, None))
    }
}

// ---------------------------------------------------------------------------
// Perfect-efficiency bound table.
// ---------------------------------------------------------------------------

/// Recognize the closed forms worth annotating in bound tables.
pub fn exact_form(value: f64) -> Option<&'static str> {
    let candidates = [
        (std::f64::consts::FRAC_1_SQRT_2, "1/sqrt(2)"),
        (1.0 / 3.0f64.sqrt(), "1/sqrt(3)"),
        (0.5, "1/2"),
        (1.0 / 3.0, "1/3"),
    ];
    candidates
        .iter()
        .find(|(v, _)| (value - v).abs() <= 1e-12)
        .map(|&(_, form)| form)
}

/// One perfect-efficiency bound with its closed form, when recognized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerfectBoundRow {
    pub n: usize,
    pub criterion: Criterion,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

/// Tabulate k_n and g_n at perfect efficiency for the requested sets,
/// criterion-major so each criterion's values read as one block.
pub fn perfect_bound_rows(ns: &[usize], criteria: &[Criterion]) -> Result<Vec<PerfectBoundRow>> {
    let mut rows = Vec::new();
    for &criterion in criteria {
        for &n in ns {
            let set = crate::geometry::build_measurement_set(n)?;
            let value = match criterion {
                Criterion::Linear => crate::bounds::linear_bound_perfect(&set),
                Criterion::Variance => crate::bounds::variance_bound_perfect(&set),
            };
            rows.push(PerfectBoundRow {
                n,
                criterion,
                value,
                exact: exact_form(value).map(str::to_string),
            });
        }
    }
    Ok(rows)
}

const BOUNDS_HEADER: &str = "n,criterion,value,exact";

/// Render a perfect-bound table as CSV; unannotated rows leave `exact` blank.
pub fn write_bounds_csv(rows: &[PerfectBoundRow]) -> String {
    let mut out = format!("{BOUNDS_HEADER}\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.n,
            row.criterion,
            csv_float(row.value),
            row.exact.as_deref().unwrap_or(""),
        ));
    }
    out
}

/// Parse a CSV produced by [`write_bounds_csv`].
pub fn parse_bounds_csv(text: &str) -> Result<Vec<PerfectBoundRow>> {
    const WHAT: &str = "bounds csv";
    check_no_carriage_returns(WHAT, text)?;
    let mut lines = text.lines();
    if lines.next() != Some(BOUNDS_HEADER) {
        return Err(Error::parse(WHAT, "missing header row".to_string()));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let fields = expect_columns(WHAT, line_no, line, 4)?;
        rows.push(PerfectBoundRow {
            n: field_usize(WHAT, line_no, fields[0])?,
            criterion: fields[1].parse()?,
            value: field_f64(WHAT, line_no, fields[2])?,
            exact: if fields[3].is_empty() {
                None
            } else {
                Some(fields[3].to_string())
            },
        });
    }
    if rows.is_empty() {
        return Err(Error::parse(WHAT, "no data rows".to_string()));
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Bound-curve CSV.
// ---------------------------------------------------------------------------

const CURVE_HEADER_LINEAR: &str = "epsilon,envelope,post_selected,violation_possible";
const CURVE_HEADER_VARIANCE: &str =
    "epsilon,envelope,post_selected,sqrt_post_selected,violation_possible";

/// The grid portion of a bound curve as recovered from a CSV artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTable {
    pub n: usize,
    pub criterion: Criterion,
    pub grid: Vec<GridPoint>,
}

/// Render the efficiency grid of a bound curve as CSV.
pub fn write_curve_csv(n: usize, criterion: Criterion, grid: &[GridPoint]) -> String {
    let mut out = format!("# n={n} criterion={criterion}\n");
    match criterion {
        Criterion::Linear => out.push_str(CURVE_HEADER_LINEAR),
        Criterion::Variance => out.push_str(CURVE_HEADER_VARIANCE),
    }
    out.push('\n');
    for p in grid {
        out.push_str(&csv_float(p.epsilon));
        out.push(',');
        out.push_str(&csv_float(p.envelope));
        out.push(',');
        out.push_str(&csv_float(p.post_selected));
        out.push(',');
        if let Some(sqrt) = p.sqrt_post_selected {
            out.push_str(&csv_float(sqrt));
            out.push(',');
        }
        out.push_str(if p.violation_possible {
            "true"
        } else {
            "false"
        });
        out.push('\n');
    }
    out
}

/// Parse a curve CSV produced by [`write_curve_csv`].
pub fn parse_curve_csv(text: &str) -> Result<CurveTable> {
    const WHAT: &str = "curve csv";
    check_no_carriage_returns(WHAT, text)?;
    let mut lines = text.lines();
    let (n, criterion) = parse_meta_line(WHAT, lines.next(), true)?;
    let criterion = criterion.expect("meta line carries a criterion");
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(WHAT, "missing header row".to_string()))?;
    let expected = match criterion {
        Criterion::Linear => CURVE_HEADER_LINEAR,
        Criterion::Variance => CURVE_HEADER_VARIANCE,
    };
    if header != expected {
        return Err(Error::parse(
            WHAT,
            format!("header {header:?} does not match {expected:?}"),
        ));
    }
    let width = expected.split(',').count();
    let mut grid = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 3;
        let fields = expect_columns(WHAT, line_no, line, width)?;
        let sqrt_post_selected = match criterion {
            Criterion::Linear => None,
            Criterion::Variance => Some(field_f64(WHAT, line_no, fields[3])?),
        };
        grid.push(GridPoint {
            epsilon: field_f64(WHAT, line_no, fields[0])?,
            envelope: field_f64(WHAT, line_no, fields[1])?,
            post_selected: field_f64(WHAT, line_no, fields[2])?,
            sqrt_post_selected,
            violation_possible: field_bool(WHAT, line_no, fields[width - 1])?,
        });
    }
    if grid.is_empty() {
        return Err(Error::parse(WHAT, "no data rows".to_string()));
    }
    Ok(CurveTable { n, criterion, grid })
}

// ---------------------------------------------------------------------------
// Deterministic-point CSV.
// ---------------------------------------------------------------------------

/// Whether a deterministic bound point is a vertex of the concave envelope
/// (nondegenerate) or is dominated by a mixture of other strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointFlag {
    Extreme,
    Dominated,
}

impl PointFlag {
    pub fn name(self) -> &'static str {
        match self {
            PointFlag::Extreme => "extreme",
            PointFlag::Dominated => "dominated",
        }
    }
}

impl std::str::FromStr for PointFlag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "extreme" => Ok(PointFlag::Extreme),
            "dominated" => Ok(PointFlag::Dominated),
            other => Err(Error::parse(
                "point flag",
                format!("expected \"extreme\" or \"dominated\", got {other:?}"),
            )),
        }
    }
}

/// One deterministic bound point prepared for tabulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointRow {
    /// Number of answered settings.
    pub m: usize,
    /// Apparent efficiency m/n.
    pub epsilon: f64,
    /// Raw deterministic bound D or F at that efficiency.
    pub value: f64,
    /// Post-selected deterministic bound, value / epsilon.
    pub post_selected: f64,
    /// Envelope value at the same efficiency.
    pub envelope: f64,
    pub flag: PointFlag,
    /// Number of response plans achieving the bound.
    pub plans: usize,
}

/// Deterministic-point table for one measurement set and criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointsTable {
    pub n: usize,
    pub criterion: Criterion,
    pub rows: Vec<PointRow>,
}

impl PointsTable {
    /// Tabulate the deterministic points of a curve, flagging each as an
    /// envelope vertex or as dominated by a mixture.
    pub fn from_curve(curve: &BoundCurve) -> Result<PointsTable> {
        let rows = curve
            .deterministic_points
            .iter()
            .map(|p| {
                let env = envelope(&curve.deterministic_points, p.epsilon_m)?;
                let extreme = env.support.len() == 1 && env.support[0].0 == p.reported;
                Ok(PointRow {
                    m: p.reported,
                    epsilon: p.epsilon_m,
                    value: p.value,
                    post_selected: p.value / p.epsilon_m,
                    envelope: env.value,
                    flag: if extreme {
                        PointFlag::Extreme
                    } else {
                        PointFlag::Dominated
                    },
                    plans: p.plans.len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PointsTable {
            n: curve.n,
            criterion: curve.criterion,
            rows,
        })
    }
}

const POINTS_HEADER: &str = "m,epsilon,value,post_selected,envelope,flag,plans";

/// Render a deterministic-point table as CSV.
pub fn write_points_csv(table: &PointsTable) -> String {
    let mut out = format!(
        "# n={} criterion={}\n{POINTS_HEADER}\n",
        table.n, table.criterion
    );
    for row in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.m,
            csv_float(row.epsilon),
            csv_float(row.value),
            csv_float(row.post_selected),
            csv_float(row.envelope),
            row.flag.name(),
            row.plans,
        ));
    }
    out
}

/// Parse a deterministic-point CSV produced by [`write_points_csv`].
pub fn parse_points_csv(text: &str) -> Result<PointsTable> {
    const WHAT: &str = "points csv";
    check_no_carriage_returns(WHAT, text)?;
    let mut lines = text.lines();
    let (n, criterion) = parse_meta_line(WHAT, lines.next(), true)?;
    let criterion = criterion.expect("meta line carries a criterion");
    match lines.next() {
        Some(POINTS_HEADER) => {}
        other => {
            return Err(Error::parse(
                WHAT,
                format!("header {other:?} does not match {POINTS_HEADER:?}"),
            ))
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 3;
        let fields = expect_columns(WHAT, line_no, line, 7)?;
        rows.push(PointRow {
            m: field_usize(WHAT, line_no, fields[0])?,
            epsilon: field_f64(WHAT, line_no, fields[1])?,
            value: field_f64(WHAT, line_no, fields[2])?,
            post_selected: field_f64(WHAT, line_no, fields[3])?,
            envelope: field_f64(WHAT, line_no, fields[4])?,
            flag: fields[5].parse()?,
            plans: field_usize(WHAT, line_no, fields[6])?,
        });
    }
    if rows.is_empty() {
        return Err(Error::parse(WHAT, "no data rows".to_string()));
    }
    Ok(PointsTable { n, criterion, rows })
}

// ---------------------------------------------------------------------------
// Criterion-comparison CSV.
// ---------------------------------------------------------------------------

/// Post-selected linear and root-variance bounds at one grid efficiency,
/// with their margin sqrt(g) - k (nonnegative everywhere).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub n: usize,
    pub epsilon: f64,
    /// Post-selected linear bound k_n(epsilon).
    pub linear: f64,
    /// Root of the post-selected variance bound, sqrt(g_n(epsilon)).
    pub sqrt_variance: f64,
    /// sqrt_variance - linear: the linear criterion's loss-tolerance margin.
    pub margin: f64,
}

/// Pair up a linear and a variance curve over the same grid.
pub fn comparison_rows(linear: &BoundCurve, variance: &BoundCurve) -> Result<Vec<ComparisonRow>> {
    if linear.criterion != Criterion::Linear || variance.criterion != Criterion::Variance {
        return Err(Error::InvalidGrid(
            "comparison needs one linear and one variance curve, in that order".into(),
        ));
    }
    if linear.n != variance.n || linear.grid.len() != variance.grid.len() {
        return Err(Error::InvalidGrid(
            "comparison curves must share a measurement set and grid".into(),
        ));
    }
    linear
        .grid
        .iter()
        .zip(&variance.grid)
        .map(|(lin, var)| {
            if lin.epsilon != var.epsilon {
                return Err(Error::InvalidGrid(
                    "comparison curves must share a measurement set and grid".into(),
                ));
            }
            let sqrt_variance = var
                .sqrt_post_selected
                .expect("variance grid points carry sqrt values");
            Ok(ComparisonRow {
                n: linear.n,
                epsilon: lin.epsilon,
                linear: lin.post_selected,
                sqrt_variance,
                margin: sqrt_variance - lin.post_selected,
            })
        })
        .collect()
}

const COMPARISON_COMMENT: &str =
    "# margin = sqrt_variance - linear; nonnegative means the linear test tolerates more loss";
const COMPARISON_HEADER: &str = "n,epsilon,linear,sqrt_variance,margin";

/// Render comparison rows (possibly covering several n) as CSV.
pub fn write_comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = format!("{COMPARISON_COMMENT}\n{COMPARISON_HEADER}\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.n,
            csv_float(row.epsilon),
            csv_float(row.linear),
            csv_float(row.sqrt_variance),
            csv_float(row.margin),
        ));
    }
    out
}

/// Parse a comparison CSV produced by [`write_comparison_csv`].
pub fn parse_comparison_csv(text: &str) -> Result<Vec<ComparisonRow>> {
    const WHAT: &str = "comparison csv";
    check_no_carriage_returns(WHAT, text)?;
    let mut lines = text.lines();
    if lines.next() != Some(COMPARISON_COMMENT) {
        return Err(Error::parse(WHAT, "missing comment line".to_string()));
    }
    if lines.next() != Some(COMPARISON_HEADER) {
        return Err(Error::parse(WHAT, "missing header row".to_string()));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 3;
        let fields = expect_columns(WHAT, line_no, line, 5)?;
        rows.push(ComparisonRow {
            n: field_usize(WHAT, line_no, fields[0])?,
            epsilon: field_f64(WHAT, line_no, fields[1])?,
            linear: field_f64(WHAT, line_no, fields[2])?,
            sqrt_variance: field_f64(WHAT, line_no, fields[3])?,
            margin: field_f64(WHAT, line_no, fields[4])?,
        });
    }
    if rows.is_empty() {
        return Err(Error::parse(WHAT, "no data rows".to_string()));
    }
    Ok(rows)
}

/// Deterministic bounds of both criteria at one answered count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonPointRow {
    pub n: usize,
    pub m: usize,
    pub epsilon: f64,
    /// Post-selected deterministic linear bound D/epsilon.
    pub linear: f64,
    /// Root of the post-selected deterministic variance bound sqrt(F/epsilon).
    pub sqrt_variance: f64,
    pub margin: f64,
    /// True when the two bounds agree to within [`COINCIDENCE_TOL`].
    pub coincident: bool,
}

/// Pair up the deterministic points of a linear and a variance curve.
pub fn comparison_point_rows(
    linear: &BoundCurve,
    variance: &BoundCurve,
) -> Result<Vec<ComparisonPointRow>> {
    if linear.criterion != Criterion::Linear || variance.criterion != Criterion::Variance {
        return Err(Error::InvalidGrid(
            "comparison needs one linear and one variance curve, in that order".into(),
        ));
    }
    if linear.n != variance.n
        || linear.deterministic_points.len() != variance.deterministic_points.len()
    {
        return Err(Error::InvalidGrid(
            "comparison curves must share a measurement set and grid".into(),
        ));
    }
    linear
        .deterministic_points
        .iter()
        .zip(&variance.deterministic_points)
        .map(|(lin, var)| {
            if lin.reported != var.reported {
                return Err(Error::InvalidGrid(
                    "deterministic tables disagree on answered counts".into(),
                ));
            }
            let k = lin.value / lin.epsilon_m;
            let sqrt_g = (var.value / var.epsilon_m).sqrt();
            Ok(ComparisonPointRow {
                n: linear.n,
                m: lin.reported,
                epsilon: lin.epsilon_m,
                linear: k,
                sqrt_variance: sqrt_g,
                margin: sqrt_g - k,
                coincident: (sqrt_g - k).abs() <= COINCIDENCE_TOL,
            })
        })
        .collect()
}

const COMPARISON_POINTS_HEADER: &str = "n,m,epsilon,linear,sqrt_variance,margin,coincident";

/// Render deterministic-point comparison rows as CSV.
pub fn write_comparison_points_csv(rows: &[ComparisonPointRow]) -> String {
    let mut out = format!("{COMPARISON_COMMENT}\n{COMPARISON_POINTS_HEADER}\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.n,
            row.m,
            csv_float(row.epsilon),
            csv_float(row.linear),
            csv_float(row.sqrt_variance),
            csv_float(row.margin),
            if row.coincident { "true" } else { "false" },
        ));
    }
    out
}

/// Parse a CSV produced by [`write_comparison_points_csv`].
pub fn parse_comparison_points_csv(text: &str) -> Result<Vec<ComparisonPointRow>> {
    const WHAT: &str = "comparison points csv";
    check_no_carriage_returns(WHAT, text)?;
    let mut lines = text.lines();
    if lines.next() != Some(COMPARISON_COMMENT) {
        return Err(Error::parse(WHAT, "missing comment line".to_string()));
    }
    if lines.next() != Some(COMPARISON_POINTS_HEADER) {
        return Err(Error::parse(WHAT, "missing header row".to_string()));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 3;
        let fields = expect_columns(WHAT, line_no, line, 7)?;
        rows.push(ComparisonPointRow {
            n: field_usize(WHAT, line_no, fields[0])?,
            m: field_usize(WHAT, line_no, fields[1])?,
            epsilon: field_f64(WHAT, line_no, fields[2])?,
            linear: field_f64(WHAT, line_no, fields[3])?,
            sqrt_variance: field_f64(WHAT, line_no, fields[4])?,
            margin: field_f64(WHAT, line_no, fields[5])?,
            coincident: field_bool(WHAT, line_no, fields[6])?,
        });
    }
    if rows.is_empty() {
        return Err(Error::parse(WHAT, "no data rows".to_string()));
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Critical-purity (naive sweep) CSV.
// ---------------------------------------------------------------------------

/// Critical purity under every loss regime and criterion at one efficiency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaiveSweepRow {
    pub epsilon: f64,
    pub anger_linear: CriticalPurity,
    pub depression_linear: CriticalPurity,
    pub postselect_linear: CriticalPurity,
    pub anger_variance: CriticalPurity,
    pub depression_variance: CriticalPurity,
    pub postselect_variance: CriticalPurity,
}

/// Critical-purity table for one measurement set over an efficiency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveSweep {
    pub n: usize,
    pub rows: Vec<NaiveSweepRow>,
}

impl NaiveSweep {
    /// Evaluate every regime of the critical purity over `grid`.
    pub fn from_grid(set: &MeasurementSet, grid: &[f64]) -> Result<NaiveSweep> {
        let cell = |regime, criterion, epsilon| critical_purity(regime, criterion, set, epsilon);
        let rows = grid
            .iter()
            .map(|&epsilon| {
                Ok(NaiveSweepRow {
                    epsilon,
                    anger_linear: cell(LossRegime::Anger, Criterion::Linear, epsilon)?,
                    depression_linear: cell(LossRegime::Depression, Criterion::Linear, epsilon)?,
                    postselect_linear: cell(LossRegime::Postselect, Criterion::Linear, epsilon)?,
                    anger_variance: cell(LossRegime::Anger, Criterion::Variance, epsilon)?,
                    depression_variance: cell(
                        LossRegime::Depression,
                        Criterion::Variance,
                        epsilon,
                    )?,
                    postselect_variance: cell(
                        LossRegime::Postselect,
                        Criterion::Variance,
                        epsilon,
                    )?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NaiveSweep { n: set.n(), rows })
    }
}

const NAIVE_COMMENT_LINEAR: &str =
    "# anger and depression linear tests cannot succeed for epsilon < 0.5 at any purity";
const NAIVE_COMMENT_VARIANCE: &str =
    "# anger variance tests cannot succeed for epsilon < 0.577350269190 (1/sqrt(3))";
const NAIVE_HEADER: &str = "epsilon,anger_linear,depression_linear,postselect_linear,\
                            anger_variance,depression_variance,postselect_variance";

fn purity_field(p: CriticalPurity) -> String {
    match p {
        CriticalPurity::Achievable(mu) => csv_float(mu),
        // A blank field: no purity reaches the bound at this efficiency.
        CriticalPurity::Impossible => String::new(),
    }
}

fn parse_purity_field(what: &'static str, line_no: usize, field: &str) -> Result<CriticalPurity> {
    if field.is_empty() {
        return Ok(CriticalPurity::Impossible);
    }
    Ok(CriticalPurity::Achievable(field_f64(what, line_no, field)?))
}

/// Render a critical-purity table as CSV, annotating the failure frontiers.
pub fn write_naive_sweep_csv(sweep: &NaiveSweep) -> String {
    let mut out = format!(
        "# n={}\n{NAIVE_COMMENT_LINEAR}\n{NAIVE_COMMENT_VARIANCE}\n{NAIVE_HEADER}\n",
        sweep.n
    );
    for row in &sweep.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            csv_float(row.epsilon),
            purity_field(row.anger_linear),
            purity_field(row.depression_linear),
            purity_field(row.postselect_linear),
            purity_field(row.anger_variance),
            purity_field(row.depression_variance),
            purity_field(row.postselect_variance),
        ));
    }
    out
}

/// Parse a CSV produced by [`write_naive_sweep_csv`].
pub fn parse_naive_sweep_csv(text: &str) -> Result<NaiveSweep> {
    const WHAT: &str = "naive sweep csv";
    check_no_carriage_returns(WHAT, text)?;
    let mut lines = text.lines();
    let (n, _) = parse_meta_line(WHAT, lines.next(), false)?;
    for expected in [NAIVE_COMMENT_LINEAR, NAIVE_COMMENT_VARIANCE, NAIVE_HEADER] {
        match lines.next() {
            Some(line) if line == expected => {}
            other => {
                return Err(Error::parse(
                    WHAT,
                    format!("expected {expected:?}, got {other:?}"),
                ))
            }
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 5;
        let fields = expect_columns(WHAT, line_no, line, 7)?;
        rows.push(NaiveSweepRow {
            epsilon: field_f64(WHAT, line_no, fields[0])?,
            anger_linear: parse_purity_field(WHAT, line_no, fields[1])?,
            depression_linear: parse_purity_field(WHAT, line_no, fields[2])?,
            postselect_linear: parse_purity_field(WHAT, line_no, fields[3])?,
            anger_variance: parse_purity_field(WHAT, line_no, fields[4])?,
            depression_variance: parse_purity_field(WHAT, line_no, fields[5])?,
            postselect_variance: parse_purity_field(WHAT, line_no, fields[6])?,
        });
    }
    if rows.is_empty() {
        return Err(Error::parse(WHAT, "no data rows".to_string()));
    }
    Ok(NaiveSweep { n, rows })
}

// ---------------------------------------------------------------------------
// JSON documents.
// ---------------------------------------------------------------------------

/// Pretty-print any serializable value as an LF-terminated JSON document.
pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::parse("json", format!("encoding failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

fn from_json<T: DeserializeOwned>(what: &'static str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(what, e.to_string()))
}

/// Serialize a simulation scenario.
pub fn scenario_to_json(scenario: &Scenario) -> Result<String> {
    to_json_pretty(scenario)
}

/// Parse and validate a simulation scenario.
pub fn scenario_from_json(text: &str) -> Result<Scenario> {
    let scenario: Scenario = from_json("scenario json", text)?;
    scenario.validate()?;
    Ok(scenario)
}

/// Serialize a simulation report.
pub fn report_to_json(report: &SimulationReport) -> Result<String> {
    to_json_pretty(report)
}

/// Parse a simulation report.
pub fn report_from_json(text: &str) -> Result<SimulationReport> {
    from_json("report json", text)
}

/// Serialize a strategy catalog.
pub fn catalog_to_json(catalog: &EnsembleCatalog) -> Result<String> {
    to_json_pretty(catalog)
}

/// Parse a strategy catalog, checking its structural invariants.
pub fn catalog_from_json(text: &str) -> Result<EnsembleCatalog> {
    const WHAT: &str = "catalog json";
    let catalog: EnsembleCatalog = from_json(WHAT, text)?;
    crate::geometry::build_measurement_set(catalog.n)?;
    if !(1..=catalog.n).contains(&catalog.m) {
        return Err(Error::PlanSizeOutOfRange {
            m: catalog.m,
            n: catalog.n,
        });
    }
    if catalog.multiplicity != catalog.ensembles.len() || catalog.ensembles.is_empty() {
        return Err(Error::parse(
            WHAT,
            format!(
                "multiplicity {} does not match {} ensembles",
                catalog.multiplicity,
                catalog.ensembles.len()
            ),
        ));
    }
    for (idx, e) in catalog.ensembles.iter().enumerate() {
        if e.plan.n() != catalog.n || e.plan.reported() != catalog.m {
            return Err(Error::parse(
                WHAT,
                format!(
                    "ensemble {idx} plan does not answer m={} of n={}",
                    catalog.m, catalog.n
                ),
            ));
        }
        if (e.orientation.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::parse(
                WHAT,
                format!("ensemble {idx} orientation is not a unit vector"),
            ));
        }
    }
    Ok(catalog)
}

/// Serialize a full bound curve (grid and deterministic table).
pub fn curve_to_json(curve: &BoundCurve) -> Result<String> {
    to_json_pretty(curve)
}

/// Parse a bound curve, checking grid sanity and criterion consistency.
pub fn curve_from_json(text: &str) -> Result<BoundCurve> {
    const WHAT: &str = "curve json";
    let curve: BoundCurve = from_json(WHAT, text)?;
    crate::geometry::build_measurement_set(curve.n)?;
    if curve.grid.is_empty() {
        return Err(Error::parse(WHAT, "curve has an empty grid".to_string()));
    }
    for p in &curve.grid {
        if !(p.epsilon > 0.0 && p.epsilon <= 1.0) {
            return Err(Error::InvalidGrid(format!(
                "efficiency grid value {} is outside (0, 1]",
                p.epsilon
            )));
        }
        if p.sqrt_post_selected.is_some() != (curve.criterion == Criterion::Variance) {
            return Err(Error::parse(
                WHAT,
                "sqrt column presence does not match the criterion".to_string(),
            ));
        }
    }
    Ok(curve)
}

/// Parse verification reports as written by the verify command.
pub fn verification_from_json(text: &str) -> Result<Vec<crate::oracle::VerificationReport>> {
    from_json("verification json", text)
}

/// Serialize a measurement set.
pub fn measurement_set_to_json(set: &MeasurementSet) -> Result<String> {
    to_json_pretty(set)
}

/// Parse a measurement set; axis validation runs during deserialization.
pub fn measurement_set_from_json(text: &str) -> Result<MeasurementSet> {
    from_json("measurement set json", text)
}

// ---------------------------------------------------------------------------
// Files.
// ---------------------------------------------------------------------------

/// Read a whole text file.
pub fn read_text(path: &std::path::Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

/// Write a text file, creating parent directories as needed.
pub fn write_text(path: &std::path::Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    Ok(std::fs::write(path, text)?)
}
