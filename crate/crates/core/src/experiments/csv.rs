use std::io::Write;

use super::{SweepResult, SweepRow};
use crate::adversary::AdversaryKind;
use crate::error::{Error, Result};
use crate::topology::TopologyKind;

pub const CSV_HEADER: &str =
    "protocol,topology,n,side,k,p_rewire,rounds,adversary_kind,adversary_fraction,p_lying,p_silence,p0,runs,converged,rate,ci95";

/// Six significant digits, trailing zeros kept (C's `%#.6g`).
pub fn format_g6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.00000".into() } else { "0.00000".into() };
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        format!("{:.*}", (5 - exp) as usize, x)
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

fn row_fields(row: &SweepRow) -> [String; 16] {
    let s = &row.spec;
    let t = &s.topology;
    let a = &s.adversary;
    let ws = t.kind == TopologyKind::WattsStrogatz;
    let opt = |present: bool, v: f64| if present { format_g6(v) } else { String::new() };
    [
        s.protocol.name().to_string(),
        t.kind.as_str().to_string(),
        t.node_count().map(|n| n.to_string()).unwrap_or_default(),
        if ws { String::new() } else { t.side.map(|v| v.to_string()).unwrap_or_default() },
        if ws { t.k.to_string() } else { String::new() },
        opt(ws, t.p_rewire),
        s.protocol.rounds().to_string(),
        a.kind.as_str().to_string(),
        opt(!a.kind.is_honest(), a.fraction),
        opt(matches!(a.kind, AdversaryKind::Cautious | AdversaryKind::Berserk), a.p_lying),
        opt(a.kind == AdversaryKind::SemiCautious, a.p_silence),
        format_g6(s.p0),
        row.estimate.runs.to_string(),
        row.estimate.converged.to_string(),
        format_g6(row.estimate.rate),
        format_g6(row.estimate.ci95),
    ]
}

/// Writes the header and one line per row, in row order.
pub fn write_csv<W: Write>(result: &SweepResult, mut out: W) -> Result<()> {
    if result.rows.is_empty() {
        return Err(Error::InvalidParameter("refusing to write an empty sweep result".into()));
    }
    writeln!(out, "{CSV_HEADER}")?;
    for row in &result.rows {
        writeln!(out, "{}", row_fields(row).join(","))?;
    }
    out.flush()?;
    Ok(())
}
