//! CSV tables.

use std::io::Write;

use crate::experiment::Row;

pub const HEADER: &str = "x,analytic,monte_carlo,mc_ci_low,mc_ci_high,n_realizations,seed";

/// `v` rounded to 9 significant digits, printed like C's `%.9g` with
/// trailing zeros removed. Rust float formatting never consults the locale.
pub fn format_sig(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        trim_zeros(format!("{:.*}", (8 - exp) as usize, v))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Writes the header and one line per row; Monte-Carlo fields stay empty
/// for analytic-only rows.
pub fn write_csv<W: Write + ?Sized>(out: &mut W, rows: &[Row], seed: u64) -> std::io::Result<()> {
    writeln!(out, "{HEADER}")?;
    for r in rows {
        match r.mc {
            Some(m) => writeln!(
                out,
                "{},{},{},{},{},{},{seed}",
                format_sig(r.x),
                format_sig(r.analytic),
                format_sig(m.value),
                format_sig(m.ci_low),
                format_sig(m.ci_high),
                m.realizations,
            )?,
            None => writeln!(out, "{},{},,,,,", format_sig(r.x), format_sig(r.analytic))?,
        }
    }
    Ok(())
}
