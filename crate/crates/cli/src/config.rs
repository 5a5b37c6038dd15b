//! Flag and config-file handling. A run is described by a single JSON
//! object mirroring the flags; flags override file values.

use clap::{Parser, ValueEnum};
use std::path::PathBuf;

use szego_core::symbol::SymbolSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Evolve,
    Compare,
    Conserve,
    Inflate,
    ToeplitzKernel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Spectral numerics for the cubic Szegő equation: evolve symbols by the
/// exact Hankel-exponential flow, cross-check against an RK4 integrator,
/// audit conserved quantities, and run the norm-inflation and Toeplitz
/// kernel experiments.
#[derive(Debug, Parser)]
#[command(name = "szego", version, about, allow_negative_numbers = true)]
pub struct Cli {
    /// What to run: evolve | compare | conserve | inflate | toeplitz-kernel
    #[arg(long, value_enum)]
    pub command: Option<Command>,

    /// Symbol as inline JSON or a path to a JSON file
    #[arg(long)]
    pub symbol: Option<String>,

    /// Flow time
    #[arg(long)]
    pub t: Option<f64>,

    /// Matrix truncation dimension (kernel command: coefficient window)
    #[arg(long = "N")]
    pub n: Option<usize>,

    /// Output coefficient count (kernel command: checked modes)
    #[arg(long = "M")]
    pub m: Option<usize>,

    /// RK4 step size
    #[arg(long)]
    pub dt: Option<f64>,

    /// Experiment parameter ε
    #[arg(long)]
    pub eps: Option<f64>,

    /// Sobolev index δ of the weak norm
    #[arg(long)]
    pub delta: Option<f64>,

    /// Inflation amplitude R
    #[arg(long = "R")]
    pub r: Option<f64>,

    /// Inflation frequency substitution
    #[arg(long)]
    pub nsub: Option<usize>,

    /// Boundary sampling grid (power of two)
    #[arg(long = "grid-m")]
    pub grid_m: Option<usize>,

    /// Output path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Report format
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Seed for presets that do not carry one
    #[arg(long)]
    pub seed: Option<u64>,

    /// JSON config file mirroring the flags; flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fully resolved run description. The symbol stays as raw JSON until a
/// command asks for it, so the run-level seed can participate in its
/// decoding.
#[derive(Debug)]
pub struct RunConfig {
    pub command: Command,
    pub symbol: Option<serde_json::Value>,
    pub t: Option<f64>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub dt: Option<f64>,
    pub eps: Option<f64>,
    pub delta: Option<f64>,
    pub r: Option<f64>,
    pub nsub: Option<usize>,
    pub grid_m: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

fn bad(msg: impl Into<String>) -> String {
    msg.into()
}

macro_rules! take_num {
    ($obj:expr, $key:literal, $as:ident, $ty:ty) => {
        match $obj.get($key) {
            None => None,
            Some(v) => Some(
                v.$as()
                    .ok_or_else(|| bad(format!("config field '{}' has the wrong type", $key)))?
                    as $ty,
            ),
        }
    };
}

impl RunConfig {
    /// Merge flags over the optional config file.
    pub fn resolve(cli: Cli) -> Result<Self, String> {
        let file: serde_json::Map<String, serde_json::Value> = match &cli.config {
            None => serde_json::Map::new(),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| bad(format!("cannot read config {}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| bad(format!("config is not a JSON object: {e}")))?
            }
        };

        let command = match cli.command {
            Some(c) => c,
            None => match file.get("command").and_then(|v| v.as_str()) {
                Some(s) => {
                    Command::from_str(s, true).map_err(|_| bad(format!("unknown command '{s}'")))?
                }
                None => return Err(bad("missing required field 'command'")),
            },
        };
        let format = match cli.format {
            Some(f) => f,
            None => match file.get("format").and_then(|v| v.as_str()) {
                Some(s) => {
                    Format::from_str(s, true).map_err(|_| bad(format!("unknown format '{s}'")))?
                }
                None => Format::Csv,
            },
        };

        let t = cli.t.or(take_num!(file, "t", as_f64, f64));
        let n = cli.n.or(take_num!(file, "N", as_u64, usize));
        let m = cli.m.or(take_num!(file, "M", as_u64, usize));
        let dt = cli.dt.or(take_num!(file, "dt", as_f64, f64));
        let eps = cli.eps.or(take_num!(file, "eps", as_f64, f64));
        let delta = cli.delta.or(take_num!(file, "delta", as_f64, f64));
        let r = cli.r.or(take_num!(file, "R", as_f64, f64));
        let nsub = cli.nsub.or(take_num!(file, "nsub", as_u64, usize));
        let grid_m = cli.grid_m.or(take_num!(file, "grid_m", as_u64, usize));
        let seed = cli
            .seed
            .or(take_num!(file, "seed", as_u64, u64))
            .unwrap_or(0);
        let out = cli
            .out
            .or_else(|| file.get("out").and_then(|v| v.as_str()).map(PathBuf::from));

        // The symbol may be inline JSON, a path (as a flag), or an inline
        // object (in the config file).
        let symbol = match (&cli.symbol, file.get("symbol")) {
            (Some(arg), _) => Some(parse_symbol_arg(arg)?),
            (None, Some(serde_json::Value::String(path))) => Some(parse_symbol_arg(path)?),
            (None, Some(v)) => Some(v.clone()),
            (None, None) => None,
        };

        Ok(RunConfig {
            command,
            symbol,
            t,
            n,
            m,
            dt,
            eps,
            delta,
            r,
            nsub,
            grid_m,
            out,
            format,
            seed,
        })
    }
}

fn parse_symbol_arg(arg: &str) -> Result<serde_json::Value, String> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)
            .map_err(|e| bad(format!("cannot read symbol file {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| bad(format!("symbol is not valid JSON: {e}")))
}

/// Decode a symbol spec, letting the run-level seed stand in for a
/// geometric preset that omits its own.
pub fn symbol_from_value(mut value: serde_json::Value, seed: u64) -> Result<SymbolSpec, String> {
    if let Some(obj) = value.as_object_mut() {
        if obj.get("preset").and_then(|p| p.as_str()) == Some("geometric")
            && !obj.contains_key("seed")
        {
            obj.insert("seed".into(), serde_json::Value::from(seed));
        }
    }
    serde_json::from_value(value).map_err(|e| bad(format!("invalid symbol: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli_from(args: &[&str]) -> Cli {
        Cli::parse_from(std::iter::once("szego").chain(args.iter().copied()))
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join("szego-cli-test-config");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.json");
        std::fs::write(
            &path,
            r#"{"command": "evolve", "t": 2.0, "N": 32, "format": "json",
                "symbol": {"preset": "plus_eps", "eps": 0.5}}"#,
        )
        .unwrap();
        let cli = cli_from(&["--config", path.to_str().unwrap(), "--t", "1.5"]);
        let rc = RunConfig::resolve(cli).unwrap();
        assert_eq!(rc.command, Command::Evolve);
        assert_eq!(rc.t, Some(1.5)); // flag wins
        assert_eq!(rc.n, Some(32));
        assert_eq!(rc.format, Format::Json);
        assert!(rc.symbol.is_some());
    }

    #[test]
    fn inline_symbol_and_seed_injection() {
        let cli = cli_from(&[
            "--command",
            "evolve",
            "--symbol",
            r#"{"preset": "geometric", "ratio": 0.5, "dim": 4}"#,
            "--seed",
            "9",
        ]);
        let rc = RunConfig::resolve(cli).unwrap();
        let u = symbol_from_value(rc.symbol.unwrap(), rc.seed)
            .unwrap()
            .build()
            .unwrap();
        let v = szego_core::symbol::geometric(0.5, 4, 9).unwrap();
        assert_eq!(u, v);
    }

    #[test]
    fn missing_command_is_an_error() {
        let cli = cli_from(&["--t", "1.0"]);
        assert!(RunConfig::resolve(cli).is_err());
    }
}
