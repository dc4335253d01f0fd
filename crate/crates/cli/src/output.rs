//! Report rendering: aligned text lines with 12 significant digits followed
//! by a JSON machine block carrying full precision.

use serde_json::Value;

pub const MACHINE_MARKER: &str = "--- machine ---";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// Text lines followed by the machine block.
    Text,
    /// The machine block only.
    Machine,
}

/// `x` with 12 significant digits: fixed notation for moderate magnitudes,
/// scientific otherwise.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // rounding can carry into a new digit, e.g. 9.99..9 -> 10.0..0
        if s.trim_start_matches('-')
            .replace('.', "")
            .trim_start_matches('0')
            .len()
            > 12
            && decimals > 0
        {
            let d = decimals - 1;
            return format!("{x:.d$}");
        }
        s
    } else {
        format!("{x:.11e}")
    }
}

pub fn sig12_list(xs: &[f64]) -> String {
    let items: Vec<String> = xs.iter().map(|&x| sig12(x)).collect();
    format!("[{}]", items.join(", "))
}

/// Collects `label value` rows and renders them with aligned values.
#[derive(Debug, Default)]
pub struct Table {
    rows: Vec<(String, String)>,
}

impl Table {
    pub fn row(&mut self, label: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.rows.push((label.into(), value.into()));
        self
    }

    pub fn num(&mut self, label: impl Into<String>, x: f64) -> &mut Self {
        self.row(label, sig12(x))
    }

    pub fn render(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|(l, _)| l.chars().count())
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        for (label, value) in &self.rows {
            let pad = width - label.chars().count();
            out.push_str(label);
            out.push_str(&" ".repeat(pad + 2));
            out.push_str(value);
            out.push('\n');
        }
        out
    }
}

pub fn machine_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// Full stdout body for a report.
pub fn render(format: Format, text: &str, machine: &Value) -> String {
    match format {
        Format::Machine => machine_json(machine),
        Format::Text => format!("{text}{MACHINE_MARKER}\n{}", machine_json(machine)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(std::f64::consts::LN_2), "0.693147180560");
        assert_eq!(sig12(1.0), "1.00000000000");
        assert_eq!(sig12(-123.456), "-123.456000000");
        assert_eq!(sig12(1.5e-14), "1.50000000000e-14");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(f64::INFINITY), "inf");
    }

    #[test]
    fn rounding_carry_keeps_twelve_digits() {
        assert_eq!(sig12(9.9999999999999), "10.0000000000");
    }

    #[test]
    fn table_aligns_values() {
        let mut t = Table::default();
        t.num("a", 1.0).row("longer", "x");
        assert_eq!(t.render(), "a       1.00000000000\nlonger  x\n");
    }
}
