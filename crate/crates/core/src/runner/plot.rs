//! gnuplot scripts for the CSV tables.

use std::fmt::Write as _;

use super::output::ScanResult;
use super::RunError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotLayout {
    /// `f, nami_0, nami_1, ...`
    Nami,
    /// `re, im, w`
    Wigner,
    /// `t, n_*, gamma_*`
    Trajectory,
    /// `t, c_*`
    Concurrence,
    /// `lambda_over_gamma, markov, blp_*, phase_*`
    Blp,
}

pub fn layout_of(columns: &[String]) -> Option<PlotLayout> {
    let first = columns.first()?.as_str();
    let rest = &columns[1..];
    if rest.is_empty() {
        return None;
    }
    let all = |p: &[&str]| rest.iter().all(|c| p.iter().any(|p| c.starts_with(p)));
    match first {
        "f" if all(&["nami_"]) => Some(PlotLayout::Nami),
        "re" if rest == ["im", "w"] => Some(PlotLayout::Wigner),
        "t" if all(&["n_", "gamma_"]) => Some(PlotLayout::Trajectory),
        "t" if all(&["c_"]) => Some(PlotLayout::Concurrence),
        "lambda_over_gamma" if rest[0] == "markov" && rest.len() > 1 && rest[1..].iter().all(|c| c.starts_with("blp_") || c.starts_with("phase_")) => {
            Some(PlotLayout::Blp)
        }
        _ => None,
    }
}

/// A gnuplot script rendering `csv_file` to `<stem>.png`.
pub fn emit_plot_script(result: &ScanResult, csv_file: &str) -> Result<String, RunError> {
    let layout = layout_of(&result.columns).ok_or_else(|| RunError::UnknownLayout(result.columns.join(",")))?;
    let stem = csv_file.strip_suffix(".csv").unwrap_or(csv_file);
    let mut s = String::new();
    if !result.units.is_empty() {
        let _ = writeln!(s, "# {}", result.units);
    }
    s.push_str("set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\n");
    let _ = writeln!(s, "set terminal pngcairo size 900,600\nset output '{stem}.png'");
    let series = |pred: &dyn Fn(&str) -> bool| -> Vec<(usize, String)> {
        result
            .columns
            .iter()
            .enumerate()
            .filter(|(_, c)| pred(c))
            .map(|(i, c)| (i + 1, c.clone()))
            .collect()
    };
    let lines = |cols: &[(usize, String)]| -> String {
        cols.iter()
            .map(|(i, c)| format!("'{csv_file}' using 1:{i} with lines title '{}'", c.replace('_', " ")))
            .collect::<Vec<_>>()
            .join(", \\\n     ")
    };
    match layout {
        PlotLayout::Nami => {
            s.push_str("set xlabel 'fragment fraction f'\nset ylabel 'NAMI'\nset yrange [0:1.05]\n");
            let _ = writeln!(s, "plot {}", lines(&series(&|c| c.starts_with("nami_"))));
        }
        PlotLayout::Wigner => {
            let bound = result
                .column("w")
                .unwrap_or_default()
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()))
                .max(1e-12);
            s.push_str("set xlabel 'Re z'\nset ylabel 'Im z'\nset size ratio -1\nset palette defined (-1 'blue', 0 'white', 1 'red')\n");
            let _ = writeln!(s, "set cbrange [{:e}:{:e}]", -bound, bound);
            let _ = writeln!(s, "plot '{csv_file}' using 1:2:3 with image notitle");
        }
        PlotLayout::Trajectory => {
            s.push_str("set multiplot layout 2,1\nset xlabel 'gamma t'\nset ylabel '<n>'\n");
            let _ = writeln!(s, "plot {}", lines(&series(&|c| c.starts_with("n_"))));
            s.push_str("set ylabel '1 - Tr rho^2'\n");
            let _ = writeln!(s, "plot {}", lines(&series(&|c| c.starts_with("gamma_"))));
            s.push_str("unset multiplot\n");
        }
        PlotLayout::Concurrence => {
            s.push_str("set xlabel 'gamma t'\nset ylabel 'concurrence'\n");
            let _ = writeln!(s, "plot {}", lines(&series(&|c| c.starts_with("c_"))));
        }
        PlotLayout::Blp => {
            s.push_str("set logscale x\nset xlabel 'Lambda / gamma'\nset ylabel 'N'\n");
            let _ = writeln!(s, "plot {}", lines(&series(&|c| c.starts_with("blp_"))));
        }
    }
    Ok(s)
}
