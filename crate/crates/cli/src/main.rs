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

use std::path::PathBuf;
use std::process::ExitCode;

use camac_cli::check::all_pass;
use camac_cli::curves::{ccdf_table, laplace_table, CurveOptions};
use camac_cli::figures::{run_figure, Figure};
use camac_cli::{plot, validate, CliError, ExperimentConfig};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "camac", version, about = "Shot-noise ratio and CAMAC delivery experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Delivery probability with and without CAMAC, with bounds.
    Fig3(Common),
    /// Delivery probability for several database sizes.
    Fig4(Common),
    /// Alignment gain against its approximation.
    Fig5(Common),
    /// Run the invariant suite and print a pass/fail report.
    Validate(Common),
    /// Dump the shot-noise ratio CCDF.
    Ccdf(CurveArgs),
    /// Dump the shot-noise ratio Laplace transform.
    Laplace(CurveArgs),
}

#[derive(Args, Default)]
struct Common {
    /// Flat key=value settings file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Path-loss exponent; repeat for several.
    #[arg(long)]
    alpha: Vec<f64>,
    #[arg(long)]
    n_files: Option<usize>,
    /// Comma-separated database sizes for fig4 and fig5.
    #[arg(long)]
    n_list: Option<String>,
    #[arg(long)]
    theta: Option<f64>,
    /// Comma-separated popularity skewness values.
    #[arg(long)]
    gamma_grid: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tail_tol: Option<f64>,
    /// Comma-separated analytic methods.
    #[arg(long)]
    methods: Option<String>,
    /// Absolute tolerance for Monte Carlo agreement checks.
    #[arg(long)]
    check_tol: Option<f64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Check the figure against its expected properties; exit 1 on failure.
    #[arg(long)]
    validate: bool,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    common: Common,
    /// Density ratio lambda2 / lambda1; repeat for several.
    #[arg(long)]
    ratio: Vec<f64>,
    #[arg(long)]
    min: Option<f64>,
    #[arg(long)]
    max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Overlay a Monte Carlo estimate.
    #[arg(long)]
    simulate: bool,
}

impl Common {
    fn build(&self, base: ExperimentConfig) -> Result<ExperimentConfig, CliError> {
        let mut cfg = base;
        if let Some(p) = &self.config {
            cfg.apply_file(p)?;
        }
        let mut set = |k: &str, v: Option<String>| v.map_or(Ok(()), |v| cfg.set(k, &v));
        set("lambda", self.lambda.map(|x| x.to_string()))?;
        if !self.alpha.is_empty() {
            let v: Vec<String> = self.alpha.iter().map(|a| a.to_string()).collect();
            set("alpha", Some(v.join(",")))?;
        }
        set("n_files", self.n_files.map(|x| x.to_string()))?;
        set("n_list", self.n_list.clone())?;
        set("theta", self.theta.map(|x| x.to_string()))?;
        set("gamma_grid", self.gamma_grid.clone())?;
        set("trials", self.trials.map(|x| x.to_string()))?;
        set("seed", self.seed.map(|x| x.to_string()))?;
        set("tail_tol", self.tail_tol.map(|x| x.to_string()))?;
        set("methods", self.methods.clone())?;
        set("check_tol", self.check_tol.map(|x| x.to_string()))?;
        if let Some(d) = &self.out_dir {
            cfg.out_dir = d.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn figure(fig: Figure, args: &Common) -> Result<bool, CliError> {
    let mut base = ExperimentConfig::default();
    if fig == Figure::Fig5 {
        base.alphas = vec![4.0];
        base.n_list = vec![5, 500];
    }
    let cfg = args.build(base)?;
    let out = run_figure(&cfg, fig)?;
    for p in out.write(&cfg)? {
        println!("wrote {}", p.display());
    }
    if !args.validate {
        return Ok(true);
    }
    for c in &out.checks {
        println!("{c}");
    }
    Ok(all_pass(&out.checks))
}

fn curve(name: &str, args: &CurveArgs, defaults: CurveOptions) -> Result<bool, CliError> {
    let cfg = args.common.build(ExperimentConfig::default())?;
    let opts = CurveOptions {
        ratios: if args.ratio.is_empty() { defaults.ratios } else { args.ratio.clone() },
        min: args.min.unwrap_or(defaults.min),
        max: args.max.unwrap_or(defaults.max),
        points: args.points.unwrap_or(defaults.points),
        simulate: args.simulate,
    };
    let (table, ylabel) = match name {
        "ccdf" => (ccdf_table(&cfg, &opts)?, "Pr(R > x)"),
        _ => (laplace_table(&cfg, &opts)?, "E exp(-sR)"),
    };
    std::fs::create_dir_all(&cfg.out_dir)?;
    let csv = cfg.out_dir.join(format!("{name}.csv"));
    table.write(std::fs::File::create(&csv)?)?;
    let xlabel = if name == "ccdf" { "x" } else { "s" };
    let script = plot::curve_script(&format!("{name}.csv"), xlabel, ylabel, true, &[(4, "analytic"), (5, "simulated")]);
    let gp = cfg.out_dir.join(format!("{name}.gp"));
    std::fs::write(&gp, script)?;
    println!("wrote {}\nwrote {}", csv.display(), gp.display());
    Ok(true)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Fig3(a) => figure(Figure::Fig3, &a),
        Command::Fig4(a) => figure(Figure::Fig4, &a),
        Command::Fig5(a) => figure(Figure::Fig5, &a),
        Command::Validate(a) => {
            let report = validate::run(&a.build(ExperimentConfig::default())?)?;
            print!("{}", report.text);
            Ok(report.passed())
        }
        Command::Ccdf(a) => curve("ccdf", &a, CurveOptions::ccdf_defaults()),
        Command::Laplace(a) => curve("laplace", &a, CurveOptions::laplace_defaults()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
