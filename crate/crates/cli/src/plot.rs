// Copyright 2026 The camac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Generated gnuplot scripts for the emitted CSV tables.

use std::fmt::Write as _;

use crate::config::ExperimentConfig;
use crate::figures::Figure;

const PREAMBLE: &str = "set datafile separator ','\nset datafile commentschars '#'\nset key outside right\nset grid\n";

/// Series selector: column `col` where the method column equals `label`
/// and the other key columns match.
fn select(label: &str, alpha: f64, n: Option<usize>, col: usize) -> String {
    let n_cond = n.map(|n| format!(" && $3=={n}")).unwrap_or_default();
    format!("(strcol(4) eq '{label}' && $2=={alpha}{n_cond} ? ${col} : 1/0)")
}

pub fn figure_script(fig: Figure, cfg: &ExperimentConfig, csv: &str) -> String {
    let mut s = String::from(PREAMBLE);
    let _ = writeln!(s, "# regenerate with config hash {}", cfg.hash());
    let _ = writeln!(s, "set xlabel 'popularity skewness gamma'");
    let mut plots = Vec::new();
    match fig {
        Figure::Fig3 => {
            let _ = writeln!(s, "set ylabel 'content delivery probability'\nset output '{}.png'", fig.name());
            for &a in &cfg.alphas {
                for (label, style) in [
                    ("sim_camac", "points pt 7"),
                    ("sim_no_camac", "points pt 5"),
                    ("upper", "lines dt 2"),
                    ("lower", "lines dt 3"),
                    ("no_camac", "lines"),
                    ("alpha4_upper", "lines dt 4"),
                    ("alpha4_lower_a", "lines dt 5"),
                    ("alpha4_lower_b", "lines dt 6"),
                ] {
                    if label.starts_with("alpha4") && a != 4.0 {
                        continue;
                    }
                    plots.push(format!("'{csv}' using 1:{} with {style} title '{label} alpha={a}'", select(label, a, None, 5)));
                }
            }
        }
        Figure::Fig4 => {
            let _ = writeln!(s, "set ylabel 'content delivery probability'\nset output '{}.png'", fig.name());
            for &a in &cfg.alphas {
                for &n in &cfg.n_list {
                    plots.push(format!("'{csv}' using 1:{} with points title 'simulation N={n} alpha={a}'", select("sim_camac", a, Some(n), 5)));
                    plots.push(format!("'{csv}' using 1:{} with lines title 'analysis N={n} alpha={a}'", select("expectation", a, Some(n), 5)));
                }
            }
        }
        Figure::Fig5 => {
            let _ = writeln!(s, "set ylabel 'spatial alignment gain'\nset output '{}.png'", fig.name());
            for &a in &cfg.alphas {
                for &n in &cfg.n_list {
                    plots.push(format!("'{csv}' using 1:{} with points title 'simulation N={n} alpha={a}'", select("sim_camac", a, Some(n), 7)));
                    plots.push(format!("'{csv}' using 1:{} with lines title 'approximation N={n} alpha={a}'", select("approx_gain", a, Some(n), 7)));
                }
            }
        }
    }
    s.insert_str(0, "set terminal pngcairo size 900,600\n");
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

/// Script for a two-column curve table written by `ccdf` or `laplace`.
pub fn curve_script(csv: &str, xlabel: &str, ylabel: &str, logx: bool, series: &[(usize, &str)]) -> String {
    let mut s = String::from("set terminal pngcairo size 900,600\n");
    s.push_str(PREAMBLE);
    let _ = writeln!(s, "set xlabel '{xlabel}'\nset ylabel '{ylabel}'");
    let stem = csv.trim_end_matches(".csv");
    let _ = writeln!(s, "set output '{stem}.png'");
    if logx {
        s.push_str("set logscale x\n");
    }
    let plots: Vec<String> = series
        .iter()
        .map(|(col, title)| format!("'{csv}' using 3:{col} with linespoints title '{title}'"))
        .collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}
