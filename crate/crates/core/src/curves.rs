//! Plot-ready tables for the design and sign-power figures.
//!
//! Every row is produced by calling the corresponding single-point function;
//! this module only lays out grids and columns.

use std::io::Write;

use crate::design::{self, DesignPoint};
use crate::distributions::phi_density;
use crate::error::check_probability;
use crate::signpolicy::{sign_declaration_power, SignPolicy};
use crate::{Error, Result};

/// Points in the default density grid.
pub const DEFAULT_DENSITY_POINTS: usize = 512;

/// A named table of numeric rows with `key=value` metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    name: String,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    metadata: Vec<(String, String)>,
}

impl CurveTable {
    /// Checks row arity, finiteness and that the first column strictly increases.
    pub fn new(
        name: impl Into<String>,
        columns: Vec<String>,
        rows: Vec<Vec<f64>>,
        metadata: Vec<(String, String)>,
    ) -> Result<Self> {
        let name = name.into();
        if columns.is_empty() {
            return Err(Error::domain("a curve table needs at least one column"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(Error::domain(format!(
                    "{name}: row {i} has {} values for {} columns",
                    row.len(),
                    columns.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::numeric(format!("{name}: row {i} contains {v}")));
            }
        }
        if rows.windows(2).any(|w| !(w[0][0] < w[1][0])) {
            return Err(Error::domain(format!(
                "{name}: grid column must be strictly increasing"
            )));
        }
        Ok(Self {
            name,
            columns,
            rows,
            metadata,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn metadata(&self) -> &[(String, String)] {
        &self.metadata
    }

    /// Looks up a metadata value by key.
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Row whose first column equals `x` to within `tol`.
    pub fn row_at(&self, x: f64, tol: f64) -> Option<&[f64]> {
        self.rows
            .iter()
            .find(|r| (r[0] - x).abs() <= tol)
            .map(Vec::as_slice)
    }

    /// Writes `# key=value` comment lines, a header and the rows.
    ///
    /// Numbers use the shortest representation that round-trips to the same
    /// `f64`, so output is byte-identical across runs.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# table={}", self.name)?;
        for (k, v) in &self.metadata {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

fn meta(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Powers 0.06, 0.07, ..., 0.80.
pub fn default_power_grid() -> Vec<f64> {
    (6..=80).map(|i| i as f64 / 100.0).collect()
}

/// Effects 0, 0.05, ..., 8 in units of the standard error.
pub fn default_effect_grid() -> Vec<f64> {
    (0..=160).map(|i| i as f64 / 20.0).collect()
}

/// Sign-error budgets drawn in the sign-power figure.
pub const DEFAULT_ALPHA_S: [f64; 3] = [0.1, 0.01, 0.001];

fn format_list(xs: &[f64]) -> String {
    xs.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

/// Density of `θ̂ ~ N(1, τ²)` on a grid of `grid_n` points spanning
/// `1 ± 4 crit_z`, with the rejection cutoffs and the true value recorded in
/// the metadata.
pub fn density_cutoff_table(alpha: f64, power: f64, grid_n: usize) -> Result<CurveTable> {
    if grid_n < 2 {
        return Err(Error::domain("density grid needs at least 2 points"));
    }
    let a = design::exaggeration_analytic(&DesignPoint::new(alpha, power)?)?;
    let tau = a.tau;
    let lo = 1.0 - 4.0 * a.crit_z;
    let hi = 1.0 + 4.0 * a.crit_z;
    let step = (hi - lo) / (grid_n - 1) as f64;
    let rows = (0..grid_n)
        .map(|i| {
            let x = if i == grid_n - 1 { hi } else { lo + step * i as f64 };
            vec![x, density(x, tau)]
        })
        .collect();
    CurveTable::new(
        "density",
        cols(&["theta_hat", "density"]),
        rows,
        vec![
            meta("alpha", alpha),
            meta("power", power),
            meta("tau", tau),
            meta("cutoff_lower", -a.crit_z),
            meta("cutoff_upper", a.crit_z),
            meta("true_value", 1.0),
        ],
    )
}

/// Density of `N(1, tau²)` at `x`.
pub fn density(x: f64, tau: f64) -> f64 {
    phi_density((x - 1.0) / tau) / tau
}

fn check_power_grid(alpha: f64, grid: &[f64]) -> Result<Vec<DesignPoint>> {
    check_probability("alpha", alpha)?;
    grid.iter().map(|&p| DesignPoint::new(alpha, p)).collect()
}

/// Conditional sign-error probability against power.
pub fn type_s_curve(alpha: f64, power_grid: &[f64]) -> Result<CurveTable> {
    let rows = check_power_grid(alpha, power_grid)?
        .iter()
        .map(|d| {
            let tau = design::solve_tau(d)?;
            Ok(vec![d.power(), design::type_s(tau, alpha)?])
        })
        .collect::<Result<Vec<_>>>()?;
    CurveTable::new(
        "type_s",
        cols(&["power", "type_s"]),
        rows,
        vec![meta("alpha", alpha)],
    )
}

/// Minimum and expected `|θ̂/θ|` among rejections against power.
pub fn exaggeration_curve(alpha: f64, power_grid: &[f64]) -> Result<CurveTable> {
    let rows = check_power_grid(alpha, power_grid)?
        .iter()
        .map(|d| {
            let a = design::exaggeration_analytic(d)?;
            Ok(vec![d.power(), a.min_ratio, a.exaggeration])
        })
        .collect::<Result<Vec<_>>>()?;
    CurveTable::new(
        "exaggeration",
        cols(&["power", "min_ratio", "expected_ratio"]),
        rows,
        vec![meta("alpha", alpha)],
    )
}

/// Column label for a sign-declaration series.
pub fn sign_column_label(alpha_s: f64) -> String {
    format!("sign_alpha_s_{alpha_s}")
}

/// Power of the level-`alpha1` test and probability of a sign declaration for
/// each `alpha_s`, against the effect in standard-error units.
///
/// Sign columns report the total two-tailed rejection rate at `alpha2`.
pub fn sign_power_curves(
    alpha1: f64,
    alpha_s_list: &[f64],
    effect_grid: &[f64],
) -> Result<CurveTable> {
    let policies = alpha_s_list
        .iter()
        .map(|&s| SignPolicy::new(alpha1, s))
        .collect::<Result<Vec<_>>>()?;
    if let Some(d) = effect_grid.iter().find(|d| !(**d >= 0.0) || d.is_infinite()) {
        return Err(Error::domain(format!(
            "effect grid values must be finite and nonnegative, got {d}"
        )));
    }
    let rows = effect_grid
        .iter()
        .map(|&d| {
            let mut row = Vec::with_capacity(2 + policies.len());
            row.push(d);
            row.push(design::power_two_sided(1.0 / d, alpha1)?);
            for p in &policies {
                row.push(sign_declaration_power(d, p)?.total);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut columns = cols(&["effect_over_tau", "power_alpha1"]);
    columns.extend(alpha_s_list.iter().map(|&s| sign_column_label(s)));
    let alpha2s: Vec<f64> = policies.iter().map(SignPolicy::alpha2).collect();
    CurveTable::new(
        "sign_power",
        columns,
        rows,
        vec![
            meta("alpha1", alpha1),
            meta("alpha_s", format_list(alpha_s_list)),
            meta("alpha2", format_list(&alpha2s)),
            meta("sign_series", "total"),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grids() {
        let g = default_power_grid();
        assert_eq!(g.len(), 75);
        assert_eq!(g[0], 0.06);
        assert_eq!(*g.last().unwrap(), 0.8);
        assert!(g.contains(&0.3) && g.contains(&0.5));
        let e = default_effect_grid();
        assert_eq!(e.len(), 161);
        assert_eq!(*e.last().unwrap(), 8.0);
    }

    #[test]
    fn table_validation() {
        let c = cols(&["x", "y"]);
        assert!(CurveTable::new("t", c.clone(), vec![vec![1.0]], vec![]).is_err());
        assert!(CurveTable::new("t", c.clone(), vec![vec![1.0, 2.0], vec![1.0, 3.0]], vec![]).is_err());
        assert!(CurveTable::new("t", c.clone(), vec![vec![1.0, f64::NAN]], vec![]).is_err());
        assert!(CurveTable::new("t", c, vec![vec![1.0, 2.0], vec![2.0, 3.0]], vec![]).is_ok());
    }

    #[test]
    fn csv_layout() {
        let t = CurveTable::new(
            "demo",
            cols(&["x", "y"]),
            vec![vec![0.5, 1.0], vec![1.0, 0.25]],
            vec![meta("alpha", 0.05)],
        )
        .unwrap();
        assert_eq!(
            t.to_csv_string(),
            "# table=demo\n# alpha=0.05\nx,y\n0.5,1\n1,0.25\n"
        );
    }

    #[test]
    fn density_table_anchors() {
        let t = density_cutoff_table(0.05, 0.06, DEFAULT_DENSITY_POINTS).unwrap();
        assert_eq!(t.rows().len(), 512);
        let hi: f64 = t.meta("cutoff_upper").unwrap().parse().unwrap();
        let lo: f64 = t.meta("cutoff_lower").unwrap().parse().unwrap();
        assert!((hi - 6.65).abs() < 0.01);
        assert_eq!(lo, -hi);
        let tau: f64 = t.meta("tau").unwrap().parse().unwrap();
        let mode = density(1.0, tau);
        assert!((mode - 1.0 / (tau * (2.0 * std::f64::consts::PI).sqrt())).abs() < 1e-15);
        assert!((t.rows()[0][0] - (1.0 - 4.0 * hi)).abs() < 1e-12);
        assert_eq!(t.rows()[511][0], 1.0 + 4.0 * hi);
    }

    #[test]
    fn type_s_rows_reproduce_design() {
        let t = type_s_curve(0.05, &default_power_grid()).unwrap();
        let r = t.row_at(0.06, 1e-12).unwrap();
        assert!((r[1] - 0.2013).abs() < 1e-4);
        let r = t.row_at(0.30, 1e-12).unwrap();
        assert!(r[1] < 0.005);
        assert!((r[1] - 1.1e-3).abs() < 0.1e-3);
        assert!(t.rows().windows(2).all(|w| w[1][1] < w[0][1]));
    }

    #[test]
    fn grid_outside_domain_is_error() {
        assert!(type_s_curve(0.05, &[0.04, 0.5]).is_err());
        assert!(exaggeration_curve(0.05, &[0.5, 1.0]).is_err());
        assert!(type_s_curve(0.05, &[0.5, 0.3]).is_err());
    }

    #[test]
    fn sign_power_null_rates() {
        let t = sign_power_curves(0.05, &DEFAULT_ALPHA_S, &default_effect_grid()).unwrap();
        assert_eq!(t.columns().len(), 5);
        assert_eq!(t.columns()[2], "sign_alpha_s_0.1");
        let r0 = &t.rows()[0];
        assert!((r0[1] - 0.05).abs() < 1e-15);
        assert!((r0[2] - 0.01).abs() < 1e-15);
        assert!((r0[3] - 0.001).abs() < 1e-16);
        assert!((r0[4] - 0.0001).abs() < 1e-17);
        for r in t.rows() {
            assert!(r[2..].iter().all(|&v| v <= r[1]));
        }
        assert!(sign_power_curves(0.05, &[0.6], &[0.0]).is_err());
        assert!(sign_power_curves(0.05, &[0.1], &[-1.0]).is_err());
    }
}
