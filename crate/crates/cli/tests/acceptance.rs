//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C;
use rug::{Complex, Float};
use serde_json::Value;

use eisum_core::mp::{log2_abs, parse_complex_pair, to_c64};
use eisum_core::{borel_transform, build_pade, generate_h_coefficients};
use eisum_ei::{e_oracle, ei_dyadic, DyadicTruncation, OracleConfig, Region, RemainderParams};
use eisum_resum::{borel_pade_poles, EiSumApproximant, Strategy};
use eisum_stahl::{green_function, green_rate, psi};

const BIN: &str = env!("CARGO_BIN_EXE_eisum");

fn scratch() -> PathBuf {
    let d = std::env::temp_dir().join(format!("eisum-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(BIN).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("eisum {} exited {:?}: {}", args.join(" "), out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn json(args: &[&str]) -> Result<Value, String> {
    serde_json::from_slice(&run(args)?).map_err(|e| e.to_string())
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    let e = t.elapsed();
    if e > limit {
        Err(format!("took {e:.1?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn c1_coefficients() -> Result<String, String> {
    let t = Instant::now();
    let v = json(&["coeffs", "--order", "14"])?;
    within(t, Duration::from_secs(1))?;
    let got: Vec<&str> = v["coeffs"].as_array().ok_or("no coeffs")?.iter().filter_map(Value::as_str).collect();
    let want = [
        "4/25",
        "-392/625",
        "6272/625",
        "-141196832/390625",
        "9039055872/390625",
        "-565008634278144/244140625",
        "81365672232484864/244140625",
    ];
    // stored from a_1, odd indices carry the terms
    for (i, w) in want.iter().enumerate() {
        let g = got.get(2 * i).ok_or("too few coefficients")?;
        if g != w {
            return Err(format!("a_{} = {g}, expected {w}", 2 * i + 1));
        }
    }
    Ok(format!("7 of 7 exact in {:.2?}", t.elapsed()))
}

fn c2_order_condition() -> Result<String, String> {
    let t = Instant::now();
    for n in 1..=25usize {
        let h = generate_h_coefficients(2 * n as i64).map_err(|e| e.to_string())?;
        let b = borel_transform(&h).map_err(|e| e.to_string())?;
        let p = build_pade(&b, n, n).map_err(|e| e.to_string())?;
        if !p.order_condition_holds(&b) {
            return Err(format!("[{n}/{n}] fails the order condition"));
        }
    }
    within(t, Duration::from_secs(30))?;
    Ok(format!("N = 1..25 exact in {:.2?}", t.elapsed()))
}

fn c3_borel_singularities() -> Result<String, String> {
    let v = json(&["summate", "--n", "25"])?;
    let set = &v["pole_residue_set"];
    let prec = set["precision_bits"].as_u64().ok_or("no precision")? as u32;
    let poles: Vec<C> = set["entries"]
        .as_array()
        .ok_or("no entries")?
        .iter()
        .map(|e| {
            let pair: [String; 2] = serde_json::from_value(e["pole"].clone()).unwrap();
            let z = parse_complex_pair(&pair, prec).unwrap();
            let (re, im) = to_c64(&z);
            C::new(re, im)
        })
        .collect();
    let mut by_mod = poles.clone();
    by_mod.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let (d_up, d_down) = {
        let up = by_mod[..2].iter().map(|p| (p - C::new(0.0, 1.0)).norm()).fold(f64::INFINITY, f64::min);
        let down = by_mod[..2].iter().map(|p| (p - C::new(0.0, -1.0)).norm()).fold(f64::INFINITY, f64::min);
        (up, down)
    };
    let near = poles.iter().filter(|p| p.re.abs() < 0.2).count();
    let frac = near as f64 / poles.len() as f64;
    if d_up < 0.05 && d_down < 0.05 && frac >= 0.8 {
        Ok(format!("nearest at distance {d_up:.2e}/{d_down:.2e} from ±i, {near}/{} near the axis", poles.len()))
    } else {
        Err(format!("distances {d_up:.3}/{d_down:.3}, fraction near axis {frac:.2}"))
    }
}

struct Lcg(u64);
impl Lcg {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn c4_dyadic_conformance() -> Result<String, String> {
    let t = Instant::now();
    let prec = 192;
    let trunc = DyadicTruncation::default();
    let params = RemainderParams::default();
    let mut g = Lcg(2024);
    let (mut checked, mut indeterminate, mut worst) = (0, 0, f64::NEG_INFINITY);
    while checked + indeterminate < 100 {
        let r = 0.5 * 100f64.powf(g.next());
        let th = -std::f64::consts::FRAC_PI_2 + std::f64::consts::TAU * g.next();
        let (re, im) = (r * th.cos(), r * th.sin());
        if im < 0.0 && re.abs() < 0.05 {
            continue;
        }
        let x = Complex::with_val(prec, (re, im));
        let ev = ei_dyadic(&x, &trunc, &params).map_err(|e| format!("{re}+{im}i: {e}"))?;
        let Some(bound) = ev.remainder_bound else {
            indeterminate += 1;
            continue;
        };
        let winding = if re < 0.0 && im < 0.0 { 1 } else { 0 };
        let o = e_oracle(&x, winding, &OracleConfig::default()).map_err(|e| e.to_string())?;
        let diff = Float::with_val(64, Complex::with_val(prec, &ev.value - &o).abs_ref());
        if diff > bound {
            return Err(format!("{re}+{im}i: |err| {diff} > bound {bound}"));
        }
        worst = worst.max(Float::with_val(64, &diff / &bound).to_f64().log10());
        checked += 1;
    }
    // the level bound at least halves per unit of N where Re(x/πi) > c
    let x = Complex::with_val(prec, (0.5, 6.0));
    let mut prev = None;
    for big_n in 2..16 {
        let ev = ei_dyadic(&x, &DyadicTruncation::new(30, 30, big_n).unwrap(), &params).map_err(|e| e.to_string())?;
        if ev.region != Region::Direct {
            return Err(format!("expected the direct region at {big_n}"));
        }
        let l = ev.level_bound.unwrap().to_f64();
        if let Some(p) = prev {
            if l > 0.5 * p * (1.0 + 1e-12) {
                return Err(format!("R_N ratio {} at N = {big_n}", l / p));
            }
        }
        prev = Some(l);
    }
    within(t, Duration::from_secs(60))?;
    Ok(format!(
        "{checked} points inside the bound (max log10 err/bound {worst:.1}), {indeterminate} without a region, R_N halves; {:.1?}",
        t.elapsed()
    ))
}

fn median_of_csv(bytes: &[u8]) -> Result<(f64, usize, usize), String> {
    let text = String::from_utf8_lossy(bytes);
    let mut vals = Vec::new();
    let mut failed = 0;
    for line in text.lines().skip(1) {
        let v: f64 = line.rsplit(',').next().unwrap().parse().map_err(|_| format!("bad line {line}"))?;
        if v.is_nan() {
            failed += 1;
        } else if !v.is_finite() {
            return Err(format!("non-finite residual on line {line}"));
        } else {
            vals.push(v);
        }
    }
    vals.sort_by(f64::total_cmp);
    let n = vals.len();
    let m = if n % 2 == 1 { vals[n / 2] } else { 0.5 * (vals[n / 2 - 1] + vals[n / 2]) };
    Ok((m, n, failed))
}

fn c5_residual_grid() -> Result<String, String> {
    let t = Instant::now();
    let mut meds = Vec::new();
    for n in ["5", "10", "25"] {
        let out = run(&["residual-grid", "--preset", "rhp", "--n", n, "--precision-bits", "512"])?;
        let (m, count, failed) = median_of_csv(&out)?;
        if failed > 0 || count < 1000 {
            return Err(format!("N = {n}: {count} finite, {failed} failed"));
        }
        meds.push(m);
    }
    within(t, Duration::from_secs(600))?;
    if meds[2] < meds[1] && meds[1] < meds[0] {
        Ok(format!(
            "median log10 residual N=5: {:.2}, N=10: {:.2}, N=25: {:.2}; {:.1?}",
            meds[0],
            meds[1],
            meds[2],
            t.elapsed()
        ))
    } else {
        Err(format!("medians not decreasing: {meds:?}"))
    }
}

fn c6_derivatives() -> Result<String, String> {
    let t = Instant::now();
    let prec = 512;
    let a = EiSumApproximant::assemble(borel_pade_poles(25, prec).map_err(|e| e.to_string())?, 0.0, Strategy::Oracle)
        .map_err(|e| e.to_string())?;
    let h = Float::with_val(prec, 1e-8);
    let two_h = Float::with_val(prec, &h * 2u32);
    let mut g = Lcg(99);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let r = 0.8 + 6.0 * g.next();
        let th = -2.5 + 5.0 * g.next();
        let x = Complex::with_val(prec, (r * th.cos(), r * th.sin()));
        let jp = a.jet(&Complex::with_val(prec, &x + &h)).map_err(|e| e.to_string())?;
        let jm = a.jet(&Complex::with_val(prec, &x - &h)).map_err(|e| e.to_string())?;
        let j = a.jet(&x).map_err(|e| e.to_string())?;
        for (fd, exact) in [
            (Complex::with_val(prec, &jp.f - &jm.f) / &two_h, &j.d1),
            (Complex::with_val(prec, &jp.d1 - &jm.d1) / &two_h, &j.d2),
        ] {
            let d = Complex::with_val(prec, &fd - exact);
            let rel = (log2_abs(&d) - log2_abs(exact)).exp2();
            worst = worst.max(rel);
        }
    }
    within(t, Duration::from_secs(30))?;
    if worst < 1e-10 {
        Ok(format!("max relative deviation {worst:.1e} over 20 points; {:.1?}", t.elapsed()))
    } else {
        Err(format!("relative deviation {worst:.2e}"))
    }
}

fn pole_list(v: &Value) -> Vec<(C, String, Option<C>)> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|r| {
            let pair: [String; 2] = serde_json::from_value(r["location"].clone()).unwrap();
            let (re, im) = to_c64(&parse_complex_pair(&pair, 64).unwrap());
            let ode = r["ode_location"].as_array().map(|a| C::new(a[0].as_f64().unwrap(), a[1].as_f64().unwrap()));
            (C::new(re, im), r["classification"].as_str().unwrap().to_string(), ode)
        })
        .collect()
}

fn c7_poles() -> Result<String, String> {
    let t = Instant::now();
    let base = pole_list(&json(&["poles", "--verify-ode", "--format", "json"])?);
    let higher = pole_list(&json(&["poles", "--z-order", "85", "--format", "json"])?);
    within(t, Duration::from_secs(300))?;
    let genuine: Vec<_> = base.iter().filter(|p| p.1 == "genuine").take(5).collect();
    if genuine.len() < 5 {
        return Err(format!("only {} genuine poles", genuine.len()));
    }
    let (mut worst_ode, mut worst_move) = (0.0f64, 0.0f64);
    for (loc, _, ode) in &genuine {
        let ode = ode.ok_or("no ODE location")?;
        worst_ode = worst_ode.max((ode - loc).norm());
        let moved = higher.iter().map(|h| (h.0 - loc).norm()).fold(f64::INFINITY, f64::min);
        worst_move = worst_move.max(moved);
    }
    if worst_ode < 1e-3 && worst_move < 1e-3 {
        Ok(format!("5 genuine poles: max ODE distance {worst_ode:.1e}, max shift 80->85 {worst_move:.1e}; {:.1?}", t.elapsed()))
    } else {
        Err(format!("ODE distance {worst_ode:.2e}, order shift {worst_move:.2e}"))
    }
}

fn c8_stahl() -> Result<String, String> {
    let t = Instant::now();
    if psi(C::new(0.0, 0.0)).map_err(|e| e.to_string())? != C::new(0.0, 0.0) || green_rate(C::new(0.0, 0.0)).unwrap() != 0.0 {
        return Err("G(0) != 0".into());
    }
    let g1 = green_rate(C::new(1.0, 0.0)).unwrap();
    if (g1 - (2f64.sqrt() - 1.0)).abs() > 1e-12 {
        return Err(format!("|psi(1)| = {g1}"));
    }
    for tt in [1.001, 1.01, 1.1] {
        for side in [-1e-9, 1e-9] {
            let g = green_rate(C::new(side, tt)).unwrap();
            if !(1.0 - 1e-3..=1.0).contains(&g) {
                return Err(format!("|psi({side}+{tt}i)| = {g}"));
            }
        }
    }
    let h = 1e-3;
    let f = |z: C| green_function(z).unwrap();
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut k = 0u32;
    while count < 50 {
        k += 1;
        let a = (k as f64 * 0.618_033_988_749_895).fract() * 8.0 - 4.0;
        let b = (k as f64 * 0.754_877_666_246_693).fract() * 8.0 - 4.0;
        let w = C::new(a, b);
        let to_slit = if b.abs() >= 1.0 { a.abs() } else { a.hypot(b.abs() - 1.0) };
        if w.norm() < 1.3 || to_slit < 0.8 {
            continue;
        }
        let lap = (f(w + h) + f(w - h) + f(w + C::new(0.0, h)) + f(w - C::new(0.0, h)) - 4.0 * f(w)) / (h * h);
        worst = worst.max(lap.abs());
        count += 1;
    }
    within(t, Duration::from_secs(10))?;
    if worst < 1e-6 {
        Ok(format!("G(0) = 0, |psi(1)| = {g1:.12}, boundary ok, max stencil residual {worst:.1e}"))
    } else {
        Err(format!("stencil residual {worst:.2e}"))
    }
}

fn c9_determinism() -> Result<String, String> {
    let dir = scratch();
    let mut same = Vec::new();
    for (name, args) in [
        ("summate", vec!["summate", "--n", "25"]),
        ("residual-grid", vec!["residual-grid", "--n", "25", "--grid", "1-i,0.1,6,6"]),
        ("residual-grid json", vec!["residual-grid", "--n", "10", "--preset", "lhp", "--grid", "-1-1.5i,0.5,4,4", "--format", "json"]),
    ] {
        let mut outs = Vec::new();
        for i in 0..2 {
            let path = dir.join(format!("{}-{i}", name.replace(' ', "-")));
            let mut a = args.clone();
            let p = path.display().to_string();
            a.extend(["--out", &p]);
            run(&a)?;
            outs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        if outs[0] != outs[1] {
            return Err(format!("{name} outputs differ"));
        }
        same.push(name);
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("byte-identical reruns: {}", same.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Result<String, String>); 9] = [
        ("coefficient reproduction", c1_coefficients),
        ("Padé order condition", c2_order_condition),
        ("Borel singularity structure", c3_borel_singularities),
        ("dyadic Ei conformance", c4_dyadic_conformance),
        ("resummation residual", c5_residual_grid),
        ("derivative correctness", c6_derivatives),
        ("pole-location oracle agreement", c7_poles),
        ("Stahl map checks", c8_stahl),
        ("determinism", c9_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("criterion {}: PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
