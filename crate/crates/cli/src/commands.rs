use std::io::Write;

use num_complex::Complex64 as C;
use rug::Complex;
use serde_json::json;

use eisum_core::mp::{abs_f64, fmt_complex, fmt_float, to_c64};
use eisum_core::series::rat_string;
use eisum_core::{generate_h_coefficients, Error, PoleResidueSet, Result};
use eisum_ei::{e_surface, ei_dyadic, OracleConfig, RemainderParams};
use eisum_ode_oracle::{find_pole, OdeConfig};
use eisum_poles::{locate_poles, seed_from_approximant, taylor_coefficients, Classification, PoleConfig};
use eisum_resum::{borel_pade_poles, EiSumApproximant, GridSpec, Strategy};
use eisum_stahl::error_rate_report;

use crate::settings::{Format, RunConfig, StrategyChoice};

fn emit(cfg: &RunConfig, body: &str) -> Result<()> {
    match &cfg.out {
        Some(p) => std::fs::write(p, body).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).and_then(|_| out.flush()).map_err(Error::from)
        }
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn coeffs(cfg: &RunConfig) -> Result<()> {
    let order = cfg.order.unwrap_or(2 * cfg.n);
    let h = generate_h_coefficients(order as i64)?;
    let body = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&h.to_json()),
        Format::Csv => {
            let mut s = String::from("k,a_k\n");
            for k in 0..h.len() {
                s.push_str(&format!("{k},{}\n", rat_string(&h.coeff(k))));
            }
            s
        }
    };
    emit(cfg, &body)
}

fn pole_set(cfg: &RunConfig) -> Result<PoleResidueSet> {
    borel_pade_poles(cfg.n, cfg.precision_bits)
}

fn strategy(cfg: &RunConfig) -> Strategy {
    match cfg.strategy {
        StrategyChoice::Oracle => Strategy::Oracle,
        StrategyChoice::Dyadic => Strategy::Dyadic(cfg.dyadic.clone()),
    }
}

pub fn summate(cfg: &RunConfig) -> Result<()> {
    let set = pole_set(cfg)?;
    let theta = cfg.theta.unwrap_or(0.0);
    let approx = EiSumApproximant::assemble(set, theta, strategy(cfg))?;
    let set = &approx.poles_residues;

    let near_axis = set.entries.iter().filter(|e| e.pole.real().to_f64().abs() < 0.2).count();
    let nearest: Vec<String> = set
        .entries
        .iter()
        .take(2)
        .map(|e| {
            let (re, im) = to_c64(&e.pole);
            format!("{re:.6}{im:+.6}i")
        })
        .collect();
    eprintln!("[{n}/{n}] Borel-plane Padé: {} poles, polynomial part of degree {}", set.entries.len(),
        set.polynomial_part.len().saturating_sub(1), n = cfg.n);
    eprintln!("realised orders {:?}, root residual bound {:.3e}", set.source_orders, set.root_residual_bound.to_f64());
    eprintln!("direction θ = {theta}, Stokes bracket θ1 = {:.6}, θ2 = {:.6}", approx.theta1, approx.theta2);
    if !set.entries.is_empty() {
        eprintln!(
            "{near_axis} of {} poles within 0.2 of the imaginary axis; nearest: {}",
            set.entries.len(),
            nearest.join(", ")
        );
    }

    let body = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&json!({
            "n": cfg.n,
            "theta": theta,
            "theta1": approx.theta1,
            "theta2": approx.theta2,
            "pole_residue_set": set.to_json(),
        })),
        Format::Csv => {
            let mut s = String::from("pole_re,pole_im,residue_re,residue_im\n");
            for e in &set.entries {
                let [pr, pi] = fmt_complex(&e.pole);
                let [rr, ri] = fmt_complex(&e.residue);
                s.push_str(&format!("{pr},{pi},{rr},{ri}\n"));
            }
            s
        }
    };
    emit(cfg, &body)
}

pub fn residual_grid(cfg: &RunConfig) -> Result<()> {
    let grid: GridSpec = cfg.grid.unwrap_or_else(|| cfg.preset.spec());
    let theta = cfg.theta.unwrap_or_else(|| cfg.preset.theta());
    grid.validate(cfg.grid_cap)?;
    let approx = EiSumApproximant::assemble(pole_set(cfg)?, theta, strategy(cfg))?;
    let field = eisum_resum::residual_grid(&approx, &grid, cfg.grid_cap)?;
    let failed = field.failures();
    match field.median() {
        Some(m) => eprintln!("N = {}, θ = {theta}: {} points, {failed} failed, median log10 residual {m:.3}", cfg.n, grid.len()),
        None => eprintln!("N = {}, θ = {theta}: every point failed", cfg.n),
    }
    let body = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => field.to_csv(),
        Format::Json => {
            let mut v = field.to_json();
            v["n"] = json!(cfg.n);
            v["precision_bits"] = json!(cfg.precision_bits);
            json_text(&v)
        }
    };
    emit(cfg, &body)
}

pub fn poles(cfg: &RunConfig) -> Result<()> {
    let approx = EiSumApproximant::assemble(pole_set(cfg)?, cfg.theta.unwrap_or(0.0), strategy(cfg))?;
    let z0 = cfg.z0_at(cfg.precision_bits);
    let seed = seed_from_approximant(&approx, &z0, 2 * cfg.z_order)?;
    let coeffs = taylor_coefficients(&seed, cfg.z_precision)?;
    let pc = PoleConfig {
        tau: cfg.tau,
        tau_prime: cfg.tau_prime,
        stability_tol: cfg.stability_tol,
        precision_bits: cfg.z_precision,
        ..PoleConfig::default()
    };
    let z0z = Complex::with_val(cfg.z_precision, &z0);
    let reports = locate_poles(&coeffs, &z0z, cfg.z_order, cfg.z_order, &pc)?;
    let genuine = reports.iter().filter(|r| r.classification == Classification::Genuine).count();
    eprintln!(
        "[{k}/{k}] about z0 = {}: {} poles, {genuine} genuine",
        cfg.z0,
        reports.len(),
        k = cfg.z_order
    );

    let mut ode: Vec<Option<C>> = vec![None; reports.len()];
    if cfg.verify_ode {
        let c = |z: &Complex| {
            let (re, im) = to_c64(z);
            C::new(re, im)
        };
        let mut worst = 0.0f64;
        for (slot, r) in ode.iter_mut().zip(&reports) {
            if r.classification != Classification::Genuine {
                continue;
            }
            let loc = c(&r.location);
            let found = find_pole(c(&seed.z0), c(&seed.c0), c(&seed.c1), loc, &OdeConfig::default())
                .ok_or(Error::RootFindingFailed { iterations: OdeConfig::default().max_steps, log2_residual: f64::NAN })?;
            let d = (found - loc).norm();
            eprintln!("  {:.10}{:+.10}i  ODE {:.10}{:+.10}i  |diff| {d:.2e}", loc.re, loc.im, found.re, found.im);
            worst = worst.max(d);
            *slot = Some(found);
        }
        if worst >= 1e-3 {
            return Err(Error::Domain(format!("ODE cross-check disagrees by {worst:.2e}")));
        }
    }

    let body = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => {
            let arr: Vec<_> = reports
                .iter()
                .zip(&ode)
                .map(|(r, o)| {
                    let mut v = r.to_json();
                    if let Some(o) = o {
                        v["ode_location"] = json!([o.re, o.im]);
                    }
                    v
                })
                .collect();
            json_text(&serde_json::Value::Array(arr))
        }
        Format::Csv => {
            let mut s = String::from("re,im,residue_mag,class,stability\n");
            for r in &reports {
                s.push_str(&r.csv_row());
                s.push('\n');
            }
            s
        }
    };
    emit(cfg, &body)
}

pub fn greens(cfg: &RunConfig) -> Result<()> {
    let n = cfg.n as u32;
    let m = cfg.m.unwrap_or(n);
    if !(cfg.eps > 0.0) {
        return Err(Error::InvalidArgument("--eps must be positive".into()));
    }
    let points: Vec<(f64, f64)> = match (cfg.w, cfg.grid) {
        (Some(w), _) => vec![w],
        (None, grid) => {
            let g = grid.unwrap_or(GridSpec { origin: (-2.0, -2.0), step: 0.1, nx: 41, ny: 41 });
            g.validate(cfg.grid_cap)?;
            (0..g.len()).map(|i| g.point(i)).collect()
        }
    };
    let single = cfg.w.is_some();
    let rows: Vec<(f64, f64, Result<eisum_stahl::RateReport>)> =
        points.iter().map(|&(re, im)| (re, im, error_rate_report(C::new(re, im), n, m, cfg.eps))).collect();
    if single {
        if let Some((_, _, Err(e))) = rows.first() {
            return Err(e.clone());
        }
    }
    let body = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("re,im,G,rate,vacuous\n");
            for (re, im, r) in &rows {
                match r {
                    Ok(r) => s.push_str(&format!("{re:.6},{im:.6},{:.15e},{:.15e},{}\n", r.g, r.rate, r.vacuous)),
                    Err(_) => s.push_str(&format!("{re:.6},{im:.6},NaN,NaN,NaN\n")),
                }
            }
            s
        }
        Format::Json => {
            let arr: Vec<_> = rows
                .iter()
                .map(|(re, im, r)| match r {
                    Ok(r) => r.to_json(C::new(*re, *im)),
                    Err(e) => json!({ "w": [re, im], "G": null, "reason": e.code() }),
                })
                .collect();
            json_text(&json!({ "n": n, "m": m, "eps": cfg.eps, "points": arr }))
        }
    };
    emit(cfg, &body)
}

pub fn ei_eval(cfg: &RunConfig) -> Result<()> {
    let prec = cfg.precision_bits;
    let x = cfg.x_at(prec).ok_or_else(|| Error::InvalidArgument("ei-eval needs --x".into()))?;
    let (re, im) = to_c64(&x);
    // the dyadic expansion lives on the plane cut along −i[0, ∞), arg ∈ (−π/2, 3π/2)
    let cut_plane = {
        let p = im.atan2(re);
        if p < -std::f64::consts::FRAC_PI_2 {
            p + std::f64::consts::TAU
        } else {
            p
        }
    };
    let default_arg = match cfg.strategy {
        StrategyChoice::Oracle => im.atan2(re),
        StrategyChoice::Dyadic => cut_plane,
    };
    let a = cfg.arg.unwrap_or(default_arg);
    let (value, bound, region) = match cfg.strategy {
        StrategyChoice::Oracle => (e_surface(&x, a, &OracleConfig::default())?, None, None),
        StrategyChoice::Dyadic => {
            if (a - cut_plane).abs() > 1e-12 {
                return Err(Error::Domain(format!(
                    "a fixed dyadic truncation evaluates only arg = {cut_plane} for this x"
                )));
            }
            let ev = ei_dyadic(&x, &cfg.dyadic, &RemainderParams::default())?;
            (ev.value, ev.remainder_bound, Some(ev.region.name()))
        }
    };
    let [vr, vi] = fmt_complex(&value);
    let bound_s = bound.as_ref().map(fmt_float);
    let body = match cfg.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&json!({
            "x": fmt_complex(&x),
            "arg": a,
            "value": [vr, vi],
            "remainder_bound": bound_s,
            "region": region,
            "abs": abs_f64(&value),
        })),
        Format::Csv => format!(
            "re,im,value_re,value_im,remainder_bound\n{re},{im},{vr},{vi},{}\n",
            bound_s.unwrap_or_else(|| "NaN".into())
        ),
    };
    emit(cfg, &body)
}
