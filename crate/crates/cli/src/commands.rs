use std::fmt::Write as _;
use std::path::Path;

use expsum::expsum::{approximate, eval_expsum, sweep as run_sweep, ApproxConfig, ExpSum, Objective};
use expsum::gammaapp::{ln_barnes_g_hat, ln_gamma_hat, GammaApproximant};
use expsum::polyrat::PrecisionContext;
use expsum::targets::{lookup, parse_key_value, ErrorRange, TargetSpec};
use rayon::prelude::*;
use rug::{Complex, Float};

use crate::output::{parse_range, path_string, sig20, write_file, RunManifest};
use crate::{ApproxArgs, Cli, ErrorArgs, Failure, GammaArgs, GammaFn, SweepArgs, TargetArgs};

fn target(args: &TargetArgs) -> Result<(TargetSpec, Vec<(String, String)>), Failure> {
    let params = args
        .params
        .iter()
        .map(|p| parse_key_value(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((lookup(&args.target, &params)?, params))
}

fn load_coeffs(path: &Path) -> Result<ExpSum, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Numerical(format!("cannot read {}: {e}", path.display())))?;
    ExpSum::from_json(&text)
        .map(|(s, _)| s)
        .map_err(|e| Failure::Numerical(format!("bad coefficient file {}: {e}", path.display())))
}

fn summary(r: &expsum::expsum::ErrorReport) -> String {
    format!("L1={:.4e} Linf={:.4e} maxc={:.4e}", r.l1, r.linf, r.max_abs_c)
}

pub fn approx(cli: &Cli, a: &ApproxArgs) -> Result<(), Failure> {
    let (t, params) = target(&a.target)?;
    let cfg = ApproxConfig::new(a.m, a.ninf, a.a, a.b).with_digits(cli.digits);
    let (s, report) = approximate(&t, &cfg)?;

    let mut manifest = RunManifest::new("approx", &t.name, &params, cli.digits);
    manifest.config = Some(cfg);
    manifest.output = a.out.as_deref().map(path_string);
    let json = s.to_json(Some(&manifest.to_value()))?;
    match &a.out {
        Some(path) => write_file(path, &json)?,
        None => println!("{json}"),
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!("{}", summary(&report));
    Ok(())
}

pub fn error(cli: &Cli, a: &ErrorArgs) -> Result<(), Failure> {
    let s = load_coeffs(&a.coeffs)?;
    let (t, params) = target(&a.target)?;
    let xmax = a.xmax.unwrap_or(match t.range {
        ErrorRange::Linear { x_max } => x_max,
        ErrorRange::Log { hi, .. } => hi,
    });
    if !(xmax > 0.0 && xmax.is_finite()) {
        return Err(Failure::Usage(format!("--xmax {xmax} must be positive")));
    }
    if a.n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let n = a.n as f64;
    let xs: Vec<f64> = if a.logx {
        if !(a.xmin > 0.0 && a.xmin < xmax) {
            return Err(Failure::Usage(format!("--xmin {} must lie in (0, xmax)", a.xmin)));
        }
        let (lo, hi) = (a.xmin.ln(), xmax.ln());
        (0..=a.n).map(|i| (lo + (hi - lo) * i as f64 / n).exp()).collect()
    } else {
        (0..=a.n).map(|i| xmax * i as f64 / n).collect()
    };

    let bits = s.bits();
    let rows: Vec<String> = xs
        .par_iter()
        .map(|&x| {
            let xf = Float::with_val(bits, x);
            let f = t.eval_user(&xf);
            let phi = eval_expsum(&s, &xf)?;
            let err = Float::with_val(bits, &f - &phi);
            let mut row = format!("{x}");
            if a.logx {
                row.push(',');
                row.push_str(&sig20(&Float::with_val(bits, xf.ln_ref())));
            }
            for v in [&f, &phi, &err] {
                row.push(',');
                row.push_str(&sig20(v));
            }
            Ok(row)
        })
        .collect::<Result<_, expsum::Error>>()?;

    let mut manifest = RunManifest::new("error", &t.name, &params, cli.digits);
    manifest.config = s.config().copied();
    manifest.input = Some(path_string(&a.coeffs));
    manifest.output = Some(path_string(&a.out));
    let mut csv = String::new();
    let _ = writeln!(csv, "# manifest: {}", manifest.to_value());
    csv.push_str(if a.logx { "x,ln_x,f,phi,err\n" } else { "x,f,phi,err\n" });
    for row in rows {
        csv.push_str(&row);
        csv.push('\n');
    }
    write_file(&a.out, &csv)
}

pub fn sweep(cli: &Cli, a: &SweepArgs) -> Result<(), Failure> {
    let (t, params) = target(&a.target)?;
    let a_grid = parse_range(&a.a)?;
    let b_grid = parse_range(&a.b)?;
    let objective: Objective = a.objective.parse()?;
    let base = ApproxConfig::new(a.m, a.ninf, a_grid[0], b_grid[0]).with_digits(cli.digits);
    base.validate()?;

    let outcome = run_sweep(&t, &base, &a_grid, &b_grid, objective)?;
    println!(
        "{:>10} {:>10} {:>12} {:>12} {:>12}  status",
        "A", "B", "L1", "Linf", "max|c|"
    );
    for row in &outcome.rows {
        match &row.outcome {
            Ok((_, r)) => println!(
                "{:>10} {:>10} {:>12.4e} {:>12.4e} {:>12.4e}  ok",
                row.a, row.b, r.l1, r.linf, r.max_abs_c
            ),
            Err(e) => println!(
                "{:>10} {:>10} {:>12} {:>12} {:>12}  failed: {e}",
                row.a, row.b, "-", "-", "-"
            ),
        }
    }
    let best = outcome.best_row();
    let (s, report) = outcome.best_run();
    println!("winner: A={} B={} {}", best.a, best.b, summary(report));

    if let Some(path) = &a.out {
        let mut manifest = RunManifest::new("sweep", &t.name, &params, cli.digits);
        manifest.config = Some(outcome.best_config());
        manifest.output = Some(path_string(path));
        write_file(path, &s.to_json(Some(&manifest.to_value()))?)?;
    }
    Ok(())
}

pub fn gamma(cli: &Cli, a: &GammaArgs) -> Result<(), Failure> {
    let s = load_coeffs(&a.coeffs)?;
    let ctx = PrecisionContext::new(cli.digits.max(s.digits()))?;
    let bad = || Failure::Usage(format!("--z {:?}: expected re,im or re", a.z));
    let (re, im) = match a.z.split_once(',') {
        Some((re, im)) => (re, im),
        None => (a.z.as_str(), "0"),
    };
    let re = ctx.parse_real(re).map_err(|_| bad())?;
    let im = ctx.parse_real(im).map_err(|_| bad())?;
    let z = ctx.from_parts(&re, &im);

    let g = GammaApproximant::new(s);
    let v: Complex = match a.function {
        GammaFn::Lngamma => ln_gamma_hat(&g, &z)?,
        GammaFn::Lnbarnesg => ln_barnes_g_hat(&g, &z)?,
    };
    let fmt = |x: &Float| {
        if x.is_zero() {
            "0".to_string()
        } else {
            x.to_string_radix(10, Some(cli.digits as usize))
        }
    };
    println!("{},{}", fmt(v.real()), fmt(v.imag()));
    Ok(())
}
