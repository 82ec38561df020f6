//! Channel and conditional files (TOML) and CSV / plot-data emission.
//!
//! Channel file:
//!
//! ```toml
//! card_s = 2
//! card_x = 2
//! card_y1 = 2
//! card_y2 = 2
//! state_pmf = [0.5, 0.5]
//! cost = [0.0, 1.0]      # optional, defaults to zeros
//! cost_budget = 0.5      # optional, defaults to 0
//!
//! [[kernel]]             # one table per (x, s) pair
//! x = 0
//! s = 0
//! probs = [1.0, 0.0, 0.0, 0.0]   # over (y1, y2), y2 fastest
//! ```
//!
//! Conditional file (`P(w,u,v,x|s)`, `x` fastest, one `[[cond]]` per state):
//!
//! ```toml
//! card_w = 2
//! card_u = 1
//! card_v = 1
//! [[cond]]
//! s = 0
//! probs = [0.5, 0.0, 0.0, 0.5]
//! ```

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::GaussianPoint;
use crate::gaussverify::VerificationReport;
use crate::prob::{AuxCards, AuxConditional, ChannelSpec, Pmf, Unit, INPUT_TOL};
use crate::region::{RateQuintuple, RegionFrontier};

pub const FRONTIER_HEADER: &str = "r0,r1,r2,e1,e2,provenance_id";
pub const GAUSSIAN_HEADER: &str = "gamma,rho1,rho2,r1,r2,e1,e2";
pub const VERIFY_HEADER: &str =
    "sample,p,n1,n2,q1,q2,gamma,rho1,rho2,res_r1,res_r2,res_e1,res_e2,mask1,mask2,power,state_entropy,status";
const SIG_DIGITS: usize = 12;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelDoc {
    card_s: usize,
    card_x: usize,
    card_y1: usize,
    card_y2: usize,
    state_pmf: Vec<f64>,
    #[serde(default)]
    cost: Option<Vec<f64>>,
    #[serde(default)]
    cost_budget: Option<f64>,
    kernel: Vec<KernelRow>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelRow {
    x: usize,
    s: usize,
    probs: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConditionalDoc {
    card_w: usize,
    card_u: usize,
    card_v: usize,
    cond: Vec<CondRow>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CondRow {
    s: usize,
    probs: Vec<f64>,
}

fn parse_toml<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| {
        let (line, column) = match e.span() {
            Some(span) => line_col(text, span.start),
            None => (0, 0),
        };
        Error::Parse { line, column, message: e.message().to_string() }
    })
}

/// 1-based line and column of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

pub fn parse_channel(text: &str) -> Result<ChannelSpec> {
    parse_channel_with_tolerance(text, INPUT_TOL)
}

/// As [`parse_channel`], with a custom normalization tolerance.
pub fn parse_channel_with_tolerance(text: &str, tol: f64) -> Result<ChannelSpec> {
    let doc: ChannelDoc = parse_toml(text)?;
    let rows = doc.card_x * doc.card_s;
    let row_len = doc.card_y1 * doc.card_y2;
    let mut kernel = vec![0.0; rows * row_len];
    let mut seen = vec![false; rows];
    for row in &doc.kernel {
        if row.x >= doc.card_x || row.s >= doc.card_s {
            return Err(Error::Validation(format!("kernel row (x={}, s={}) is out of range", row.x, row.s)));
        }
        let r = row.x * doc.card_s + row.s;
        if std::mem::replace(&mut seen[r], true) {
            return Err(Error::Validation(format!("kernel row (x={}, s={}) appears twice", row.x, row.s)));
        }
        if row.probs.len() != row_len {
            return Err(Error::Dimension(format!(
                "kernel row (x={}, s={}) has {} entries, expected {row_len}",
                row.x,
                row.s,
                row.probs.len()
            )));
        }
        kernel[r * row_len..(r + 1) * row_len].copy_from_slice(&row.probs);
    }
    if let Some(r) = seen.iter().position(|s| !s) {
        return Err(Error::Validation(format!("kernel row (x={}, s={}) is missing", r / doc.card_s, r % doc.card_s)));
    }
    let state = Pmf::with_tolerance(doc.state_pmf, tol).map_err(|e| Error::Validation(format!("state_pmf: {e}")))?;
    ChannelSpec::with_tolerance(
        doc.card_s,
        doc.card_x,
        doc.card_y1,
        doc.card_y2,
        state,
        kernel,
        doc.cost.unwrap_or_else(|| vec![0.0; doc.card_x]),
        doc.cost_budget.unwrap_or(0.0),
        tol,
    )
}

pub fn emit_channel(ch: &ChannelSpec) -> String {
    let row_len = ch.card_y1() * ch.card_y2();
    let doc = ChannelDoc {
        card_s: ch.card_s(),
        card_x: ch.card_x(),
        card_y1: ch.card_y1(),
        card_y2: ch.card_y2(),
        state_pmf: ch.state_pmf().probs().to_vec(),
        cost: Some(ch.cost().to_vec()),
        cost_budget: Some(ch.cost_budget()),
        kernel: (0..ch.card_x() * ch.card_s())
            .map(|r| KernelRow {
                x: r / ch.card_s(),
                s: r % ch.card_s(),
                probs: ch.kernel()[r * row_len..(r + 1) * row_len].to_vec(),
            })
            .collect(),
    };
    toml::to_string(&doc).expect("channel document always serializes")
}

pub fn parse_conditional(text: &str, ch: &ChannelSpec) -> Result<AuxConditional> {
    parse_conditional_with_tolerance(text, ch, INPUT_TOL)
}

pub fn parse_conditional_with_tolerance(text: &str, ch: &ChannelSpec, tol: f64) -> Result<AuxConditional> {
    let doc: ConditionalDoc = parse_toml(text)?;
    let cards = AuxCards::new(doc.card_w, doc.card_u, doc.card_v);
    cards.validate()?;
    let len = doc.card_w * doc.card_u * doc.card_v * ch.card_x();
    let mut table = vec![0.0; ch.card_s() * len];
    let mut seen = vec![false; ch.card_s()];
    for row in &doc.cond {
        if row.s >= ch.card_s() {
            return Err(Error::Validation(format!("conditional slice s={} is out of range", row.s)));
        }
        if std::mem::replace(&mut seen[row.s], true) {
            return Err(Error::Validation(format!("conditional slice s={} appears twice", row.s)));
        }
        if row.probs.len() != len {
            return Err(Error::Dimension(format!(
                "conditional slice s={} has {} entries, expected {len}",
                row.s,
                row.probs.len()
            )));
        }
        table[row.s * len..(row.s + 1) * len].copy_from_slice(&row.probs);
    }
    if let Some(s) = seen.iter().position(|s| !s) {
        return Err(Error::Validation(format!("conditional slice s={s} is missing")));
    }
    AuxConditional::with_tolerance(ch.card_s(), ch.card_x(), cards, table, tol)
}

pub fn emit_conditional(cond: &AuxConditional) -> String {
    let c = cond.cards();
    let doc = ConditionalDoc {
        card_w: c.w,
        card_u: c.u,
        card_v: c.v,
        cond: (0..cond.card_s()).map(|s| CondRow { s, probs: cond.slice(s).to_vec() }).collect(),
    };
    toml::to_string(&doc).expect("conditional document always serializes")
}

/// Reads a file, or standard input when `path` is `-`.
pub fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut text)?;
        Ok(text)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}


/// `%.12g`-style formatting: 12 significant digits, trailing zeros trimmed,
/// scientific notation outside `[1e-5, 1e12)`.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Frontier CSV: fixed header, one row per point in stored (lexicographic)
/// order, values in `unit`, provenance id = row index.
pub fn frontier_csv(frontier: &RegionFrontier, unit: Unit) -> String {
    let mut out = String::from(FRONTIER_HEADER);
    out.push('\n');
    for (i, q) in frontier.points.iter().enumerate() {
        for v in q.as_array() {
            out.push_str(&format_sig(unit.from_bits(v)));
            out.push(',');
        }
        let _ = writeln!(out, "{}", frontier.provenance.get(i).map_or(i, |p| p.id));
    }
    out
}

pub fn emit_frontier_csv(frontier: &RegionFrontier, unit: Unit, path: &Path) -> Result<()> {
    write_output(path, &frontier_csv(frontier, unit))
}

/// Writes to a file, or standard output when `path` is `-`.
pub fn write_output(path: &Path, text: &str) -> Result<()> {
    if path.as_os_str() == "-" {
        use std::io::Write;
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()?;
        Ok(())
    } else {
        Ok(std::fs::write(path, text)?)
    }
}

/// Parses a frontier CSV back into quintuples (in the file's unit) and
/// provenance ids.
pub fn parse_frontier_csv(text: &str) -> Result<Vec<(RateQuintuple, usize)>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == FRONTIER_HEADER => {}
        Some((n, h)) => {
            return Err(Error::Parse { line: n + 1, column: 1, message: format!("expected header `{FRONTIER_HEADER}`, got `{h}`") })
        }
        None => return Err(Error::Parse { line: 1, column: 1, message: "empty frontier file".into() }),
    }
    lines
        .map(|(n, line)| {
            let bad = |column: usize, message: String| Error::Parse { line: n + 1, column, message };
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(bad(1, format!("expected 6 fields, found {}", fields.len())));
            }
            let mut vals = [0.0; 5];
            let mut column = 1;
            for (k, f) in fields[..5].iter().enumerate() {
                vals[k] = f.trim().parse().map_err(|_| bad(column, format!("`{f}` is not a number")))?;
                column += f.len() + 1;
            }
            let id = fields[5].trim().parse().map_err(|_| bad(column, format!("`{}` is not an id", fields[5])))?;
            let q = RateQuintuple::new(vals[0], vals[1], vals[2], vals[3], vals[4])?;
            Ok((q, id))
        })
        .collect()
}

/// Rebuilds a frontier (ids kept, no conditionals) from parsed CSV rows.
pub fn frontier_from_rows(rows: Vec<(RateQuintuple, usize)>) -> RegionFrontier {
    let mut f = RegionFrontier::default();
    for (q, id) in rows {
        f.points.push(q);
        f.provenance.push(crate::region::Provenance { id, conditional: None });
    }
    f
}

pub fn gaussian_csv(points: &[GaussianPoint], unit: Unit) -> String {
    let mut out = String::from(GAUSSIAN_HEADER);
    out.push('\n');
    for p in points {
        let v = p.value;
        let cols = [p.gamma, p.rho1, p.rho2]
            .into_iter()
            .map(format_sig)
            .chain([v.r1, v.r2, v.e1, v.e2].into_iter().map(|x| format_sig(unit.from_bits(x))))
            .collect::<Vec<_>>();
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

/// Whitespace-separated columns for gnuplot (`using 4:5`, etc.).
pub fn gaussian_plot_data(points: &[GaussianPoint], unit: Unit) -> String {
    let mut out = String::from("# gamma rho1 rho2 r1 r2 e1 e2\n");
    for line in gaussian_csv(points, unit).lines().skip(1) {
        out.push_str(&line.replace(',', " "));
        out.push('\n');
    }
    out
}

pub fn verification_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from(VERIFY_HEADER);
    out.push('\n');
    for (i, r) in reports.iter().enumerate() {
        let g = r.params;
        let mut cols = vec![i.to_string()];
        cols.extend(
            [
                g.p,
                g.n1,
                g.n2,
                g.q1,
                g.q2,
                g.gamma,
                g.rho1,
                g.rho2,
                r.residual_r1,
                r.residual_r2,
                r.residual_e1,
                r.residual_e2,
                r.masking1,
                r.masking2,
                r.power_residual,
            ]
            .into_iter()
            .map(format_sig),
        );
        cols.push(r.state_entropy_residual.map_or_else(|| "NA".into(), format_sig));
        cols.push(if r.passed() { "PASS" } else { "FAIL" }.into());
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}
