use std::path::PathBuf;
use std::process::ExitCode;

use uncertainty_lab::{config::ExperimentConfig, emit_plot_data, run, EXIT_ASSERT, EXIT_CONFIG};

const USAGE: &str = "\
uncertainty-lab — torus observability experiments

USAGE:
    uncertainty-lab run --config PATH [--jobs N] [--out DIR]
    uncertainty-lab plot-data --report PATH --out DIR

Exit codes: 0 all asserted invariants passed, 1 configuration error,
2 assertion failure. The environment variable UNCERTAINTY_LAB_SEED
overrides the root seed of the configuration.
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}

fn dispatch(args: &[String]) -> Result<i32, String> {
    let Some(command) = args.first() else {
        eprint!("{USAGE}");
        return Ok(EXIT_CONFIG);
    };
    match command.as_str() {
        "run" => {
            let opts = parse_options(&args[1..])?;
            let config_path = opts.require("--config")?;
            let out_dir = opts.get("--out").unwrap_or_else(|| PathBuf::from("."));
            if let Some(jobs) = opts.get("--jobs") {
                let _: usize = jobs
                    .to_string_lossy()
                    .parse()
                    .map_err(|_| "--jobs expects an integer".to_string())?;
                // instances run sequentially; row order is deterministic
                // either way, so the flag is accepted and ignored
            }
            let config = ExperimentConfig::from_file(&config_path).map_err(|e| e.to_string())?;
            match run(&config, &out_dir) {
                Ok(artifacts) => {
                    println!(
                        "report {}\ncsv {}",
                        artifacts.report_path.display(),
                        artifacts.csv_path.display()
                    );
                    Ok(artifacts.exit_code)
                }
                Err(err) => {
                    eprintln!("error: {err}");
                    Ok(EXIT_CONFIG)
                }
            }
        }
        "plot-data" => {
            let opts = parse_options(&args[1..])?;
            let report = opts.require("--report")?;
            let out_dir = opts.require("--out")?;
            match emit_plot_data(&report, &out_dir) {
                Ok(artifacts) => {
                    for f in artifacts.files {
                        println!("data {}", f.display());
                    }
                    Ok(0)
                }
                Err(err) => {
                    eprintln!("error: {err}");
                    Ok(EXIT_CONFIG)
                }
            }
        }
        "--help" | "-h" | "help" => {
            print!("{USAGE}");
            Ok(0)
        }
        other => Err(format!("unknown command `{other}`; see --help")),
    }
}

struct Options(Vec<(String, String)>);

impl Options {
    fn get(&self, key: &str) -> Option<PathBuf> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| PathBuf::from(v))
    }

    fn require(&self, key: &str) -> Result<PathBuf, String> {
        self.get(key).ok_or_else(|| format!("missing required option {key}"))
    }
}

fn parse_options(args: &[String]) -> Result<Options, String> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(flag) = it.next() {
        if !flag.starts_with("--") {
            return Err(format!("unexpected argument `{flag}`"));
        }
        let value = it.next().ok_or_else(|| format!("option {flag} needs a value"))?;
        out.push((flag.clone(), value.clone()));
    }
    Ok(Options(out))
}

// the assertion-failure code is part of the public contract
const _: () = assert!(EXIT_ASSERT == 2);
