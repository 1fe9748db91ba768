use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use rug::Complex;

use eisum_core::mp::{parse_complex, parse_real};
use eisum_core::{default_precision_bits, Error, Result};
use eisum_ei::DyadicTruncation;
use eisum_resum::{GridPreset, GridSpec, DEFAULT_GRID_CAP};

/// Flags shared by every subcommand. Each may also come from `--config`;
/// a flag given on the command line wins over the file.
#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Borel-plane Padé half-order N ([N/N] from 2N series terms)
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long = "precision-bits")]
    pub precision_bits: Option<String>,
    /// Laplace direction θ in radians
    #[arg(long)]
    pub theta: Option<String>,
    /// Seed point for the pole search, e.g. 5+i
    #[arg(long)]
    pub z0: Option<String>,
    /// origin,step,nx,ny with origin as re,im or a+bi, e.g. "1-i,0.1,32,32"
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Named grid: rhp (origin 1-i, θ=0) or lhp (origin -1-1.5i, θ=π)
    #[arg(long)]
    pub preset: Option<String>,
    /// csv or json
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat key = value file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Highest coefficient index for `coeffs`
    #[arg(long)]
    pub order: Option<String>,
    /// oracle or dyadic
    #[arg(long)]
    pub strategy: Option<String>,
    /// Dyadic truncation n,ell,N
    #[arg(long)]
    pub dyadic: Option<String>,
    /// [k/k] order of the z-plane Padé approximant
    #[arg(long = "z-order")]
    pub z_order: Option<String>,
    #[arg(long = "z-precision")]
    pub z_precision: Option<String>,
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long = "tau-prime")]
    pub tau_prime: Option<String>,
    #[arg(long = "stability-tol")]
    pub stability_tol: Option<String>,
    /// Point for `greens`
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    /// Denominator degree for the rate report (defaults to N)
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long)]
    pub eps: Option<String>,
    /// Point for `ei-eval`
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Surface argument of x for `ei-eval` (default: principal)
    #[arg(long, allow_hyphen_values = true)]
    pub arg: Option<String>,
    #[arg(long = "grid-cap")]
    pub grid_cap: Option<String>,
    /// Cross-check genuine poles with the ODE integrator
    #[arg(long = "verify-ode")]
    pub verify_ode: bool,
}

const KEYS: &[&str] = &[
    "n", "precision-bits", "theta", "z0", "grid", "preset", "format", "out", "order", "strategy", "dyadic",
    "z-order", "z-precision", "tau", "tau-prime", "stability-tol", "w", "m", "eps", "x", "arg", "grid-cap",
    "verify-ode",
];

fn parse_config(text: &str, path: &Path) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Parse(format!("{}:{}: unknown key `{}`", path.display(), i + 1, k.trim())));
        }
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

impl Opts {
    fn flag_map(&self) -> BTreeMap<String, String> {
        let pairs: [(&str, &Option<String>); 21] = [
            ("n", &self.n),
            ("precision-bits", &self.precision_bits),
            ("theta", &self.theta),
            ("z0", &self.z0),
            ("grid", &self.grid),
            ("preset", &self.preset),
            ("format", &self.format),
            ("order", &self.order),
            ("strategy", &self.strategy),
            ("dyadic", &self.dyadic),
            ("z-order", &self.z_order),
            ("z-precision", &self.z_precision),
            ("tau", &self.tau),
            ("tau-prime", &self.tau_prime),
            ("stability-tol", &self.stability_tol),
            ("w", &self.w),
            ("m", &self.m),
            ("eps", &self.eps),
            ("x", &self.x),
            ("arg", &self.arg),
            ("grid-cap", &self.grid_cap),
        ];
        let mut m: BTreeMap<String, String> =
            pairs.iter().filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone()))).collect();
        if let Some(p) = &self.out {
            m.insert("out".into(), p.display().to_string());
        }
        if self.verify_ode {
            m.insert("verify-ode".into(), "true".into());
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyChoice {
    Oracle,
    Dyadic,
}

/// Fully validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: usize,
    pub precision_bits: u32,
    pub theta: Option<f64>,
    pub z0: String,
    pub grid: Option<GridSpec>,
    pub preset: GridPreset,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub order: Option<usize>,
    pub strategy: StrategyChoice,
    pub dyadic: DyadicTruncation,
    pub z_order: usize,
    pub z_precision: u32,
    pub tau: f64,
    pub tau_prime: f64,
    pub stability_tol: f64,
    pub w: Option<(f64, f64)>,
    pub m: Option<u32>,
    pub eps: f64,
    pub x: Option<String>,
    pub arg: Option<f64>,
    pub grid_cap: usize,
    pub verify_ode: bool,
}

fn int<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::Parse(format!("--{key}: `{v}` is not a valid integer")))
}

/// Reals go through the exact decimal/rational parser before rounding.
fn real(key: &str, v: &str) -> Result<f64> {
    let f = parse_real(v.trim(), 256).map_err(|e| Error::Parse(format!("--{key}: {e}")))?;
    let x = f.to_f64();
    if !x.is_finite() {
        return Err(Error::Parse(format!("--{key}: `{v}` is not finite")));
    }
    Ok(x)
}

fn complex_f64(key: &str, v: &str) -> Result<(f64, f64)> {
    let z = parse_complex(v.trim(), 256).map_err(|e| Error::Parse(format!("--{key}: {e}")))?;
    Ok((z.real().to_f64(), z.imag().to_f64()))
}

fn parse_grid(v: &str) -> Result<GridSpec> {
    let parts: Vec<&str> = v.split(',').map(str::trim).collect();
    let (origin, rest) = match parts.len() {
        4 => (complex_f64("grid", parts[0])?, &parts[1..]),
        5 => ((real("grid", parts[0])?, real("grid", parts[1])?), &parts[2..]),
        _ => return Err(Error::Parse(format!("--grid: expected origin,step,nx,ny, got `{v}`"))),
    };
    Ok(GridSpec { origin, step: real("grid", rest[0])?, nx: int("grid", rest[1])?, ny: int("grid", rest[2])? })
}

impl RunConfig {
    pub fn load(opts: &Opts) -> Result<Self> {
        let mut map = match &opts.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                parse_config(&text, p)?
            }
            None => BTreeMap::new(),
        };
        map.extend(opts.flag_map());
        let get = |k: &str| map.get(k).map(String::as_str);

        let n: usize = get("n").map(|v| int("n", v)).transpose()?.unwrap_or(25);
        if n == 0 {
            return Err(Error::InvalidArgument("--n must be at least 1".into()));
        }
        let precision_bits: u32 =
            get("precision-bits").map(|v| int("precision-bits", v)).transpose()?.unwrap_or(default_precision_bits(n));
        if !(64..=1 << 20).contains(&precision_bits) {
            return Err(Error::InvalidArgument(format!("--precision-bits {precision_bits} outside [64, 2^20]")));
        }
        let theta = get("theta").map(|v| real("theta", v)).transpose()?;
        let z0 = get("z0").unwrap_or("5+i").to_string();
        parse_complex(&z0, 64).map_err(|e| Error::Parse(format!("--z0: {e}")))?;
        let grid = get("grid").map(parse_grid).transpose()?;
        let preset = match get("preset") {
            None => GridPreset::Rhp,
            Some(p) => GridPreset::parse(p).ok_or_else(|| Error::Parse(format!("--preset: unknown `{p}`")))?,
        };
        let format = match get("format") {
            None => None,
            Some("csv") => Some(Format::Csv),
            Some("json") => Some(Format::Json),
            Some(f) => return Err(Error::Parse(format!("--format: expected csv or json, got `{f}`"))),
        };
        let out = get("out").map(PathBuf::from);
        let order = get("order").map(|v| int("order", v)).transpose()?;
        let strategy = match get("strategy") {
            None | Some("oracle") => StrategyChoice::Oracle,
            Some("dyadic") => StrategyChoice::Dyadic,
            Some(s) => return Err(Error::Parse(format!("--strategy: expected oracle or dyadic, got `{s}`"))),
        };
        let dyadic = match get("dyadic") {
            None => DyadicTruncation::default(),
            Some(v) => {
                let p: Vec<&str> = v.split(',').collect();
                if p.len() != 3 {
                    return Err(Error::Parse(format!("--dyadic: expected n,ell,N, got `{v}`")));
                }
                DyadicTruncation::new(int("dyadic", p[0])?, int("dyadic", p[1])?, int("dyadic", p[2])?)?
            }
        };
        let z_order = get("z-order").map(|v| int("z-order", v)).transpose()?.unwrap_or(eisum_poles::DEFAULT_Z_ORDER);
        if z_order < 2 {
            return Err(Error::InvalidArgument("--z-order must be at least 2".into()));
        }
        let z_precision = get("z-precision")
            .map(|v| int("z-precision", v))
            .transpose()?
            .unwrap_or(eisum_poles::DEFAULT_Z_PRECISION);
        if !(64..=1 << 20).contains(&z_precision) {
            return Err(Error::InvalidArgument(format!("--z-precision {z_precision} outside [64, 2^20]")));
        }
        let defaults = eisum_poles::PoleConfig::default();
        let tau = get("tau").map(|v| real("tau", v)).transpose()?.unwrap_or(defaults.tau);
        let tau_prime = get("tau-prime").map(|v| real("tau-prime", v)).transpose()?.unwrap_or(defaults.tau_prime);
        let stability_tol =
            get("stability-tol").map(|v| real("stability-tol", v)).transpose()?.unwrap_or(defaults.stability_tol);
        let w = get("w").map(|v| complex_f64("w", v)).transpose()?;
        let m = get("m").map(|v| int("m", v)).transpose()?;
        let eps = get("eps").map(|v| real("eps", v)).transpose()?.unwrap_or(0.01);
        let x = get("x").map(str::to_string);
        if let Some(x) = &x {
            parse_complex(x, 64).map_err(|e| Error::Parse(format!("--x: {e}")))?;
        }
        let arg = get("arg").map(|v| real("arg", v)).transpose()?;
        let grid_cap = get("grid-cap").map(|v| int("grid-cap", v)).transpose()?.unwrap_or(DEFAULT_GRID_CAP);
        let verify_ode = match get("verify-ode") {
            None | Some("false") => false,
            Some("true") => true,
            Some(v) => return Err(Error::Parse(format!("verify-ode: expected true or false, got `{v}`"))),
        };
        Ok(Self {
            n,
            precision_bits,
            theta,
            z0,
            grid,
            preset,
            format,
            out,
            order,
            strategy,
            dyadic,
            z_order,
            z_precision,
            tau,
            tau_prime,
            stability_tol,
            w,
            m,
            eps,
            x,
            arg,
            grid_cap,
            verify_ode,
        })
    }

    pub fn z0_at(&self, prec: u32) -> Complex {
        parse_complex(&self.z0, prec).expect("validated on load")
    }

    pub fn x_at(&self, prec: u32) -> Option<Complex> {
        self.x.as_ref().map(|x| parse_complex(x, prec).expect("validated on load"))
    }
}
