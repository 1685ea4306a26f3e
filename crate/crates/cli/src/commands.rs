use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use sohrlab_core::experiment::{
    convergence_study, dlmp_compare, micro_macro_compare, repulsion_compare, riemann_particles,
    taylor_green_compare, taylor_green_particles, ExperimentConfig, ExperimentKind, Preset,
    TAYLOR_GREEN_DENSITY,
};
use sohrlab_core::gci::{CoefficientCache, TABULATION_GRID};
use sohrlab_core::io::{
    config_from_manifest, parse_config, snapshot_name, write_snapshot, write_text, RunManifest,
};
use sohrlab_core::particle::ensemble_run;
use sohrlab_core::sohr::{run, GridSpec};
use sohrlab_core::{Coefficients, FieldState, KernelSpec};

use crate::{Cli, Command, Common, FieldPreset, FieldRun, Mesh, ParticlePreset, Timing};

/// Reads a configuration, or the configuration recorded in a run manifest.
fn load(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let config = if text.lines().any(|l| l.trim() == "[run]") {
        config_from_manifest(&text, path)?
    } else {
        parse_config(&text, path)?
    };
    Ok(config)
}

fn base_config(common: &Common, kind: Option<ExperimentKind>, fallback: ExperimentKind) -> Result<ExperimentConfig> {
    let mut c = match &common.config {
        Some(path) => {
            let c = load(path)?;
            if let Some(kind) = kind.filter(|k| *k != c.preset) {
                bail!(
                    "{} configures preset {}, but this command runs {}",
                    path.display(),
                    c.preset.as_str(),
                    kind.as_str()
                );
            }
            c
        }
        None => ExperimentConfig::preset(kind.unwrap_or(fallback))?,
    };
    if let Some(seed) = common.seed {
        c.seed = seed;
    }
    Ok(c)
}

fn set_final_time(c: &mut ExperimentConfig, t_final: Option<f64>) {
    if let Some(t) = t_final {
        c.t_final = t;
        c.snapshot_times = vec![t];
    }
}

fn apply_timing(c: &mut ExperimentConfig, timing: &Timing) {
    if let Some(dt) = timing.dt {
        c.dt = dt;
    }
    set_final_time(c, timing.t_final);
}

fn apply_mesh(c: &mut ExperimentConfig, mesh: &Mesh) -> Result<()> {
    if mesh.nx.is_some() || mesh.ny.is_some() {
        let g = c.grid;
        c.grid = GridSpec::new(mesh.nx.unwrap_or(g.nx), mesh.ny.unwrap_or(g.ny), g.lx, g.ly, g.bc)?;
    }
    Ok(())
}

fn square_mesh(nx: Option<usize>) -> Mesh {
    Mesh { nx, ny: nx }
}

fn set_ibm(
    c: &mut ExperimentConfig,
    n: Option<usize>,
    epsilons: Option<Vec<f64>>,
    realizations: Option<usize>,
) -> Result<()> {
    let preset = c.preset.as_str();
    let ibm = c
        .ibm
        .as_mut()
        .with_context(|| format!("preset {preset} has no particle settings"))?;
    if let Some(n) = n {
        ibm.n = n;
    }
    if let Some(e) = epsilons {
        ibm.epsilons = e;
    }
    if let Some(m) = realizations {
        c.realizations = m;
    }
    Ok(())
}

/// A validated configuration, its output directory and the manifest being
/// filled in.
struct Session {
    config: ExperimentConfig,
    out: PathBuf,
    manifest: RunManifest,
}

impl Session {
    fn open(mut config: ExperimentConfig, common: &Common, root: Option<&Path>, command: &str) -> Result<Self> {
        if let Some(out) = &common.out {
            config.output_dir = out.clone();
        }
        config.validate()?;
        if let Some(ibm) = &config.ibm {
            for &eps in &ibm.epsilons {
                config.ibm_params(eps, 1.0)?.validate()?;
            }
        }
        let out = match root {
            Some(root) if config.output_dir.is_relative() => root.join(&config.output_dir),
            _ => config.output_dir.clone(),
        };
        let manifest = RunManifest::new(&config, command)?;
        Ok(Self { config, out, manifest })
    }

    fn snapshot(&self, prefix: &str, field: &FieldState) -> Result<()> {
        let path = self.out.join(snapshot_name(prefix, field.time));
        write_snapshot(field, &path)?;
        Ok(())
    }

    fn text(&self, name: &str, text: &str) -> Result<()> {
        write_text(&self.out.join(name), text)?;
        Ok(())
    }

    fn record(&mut self, key: &str, value: impl std::fmt::Display) {
        self.manifest.record(key, value);
    }

    fn close(mut self) -> Result<()> {
        self.manifest.finish();
        let path = self.out.join("manifest.txt");
        self.manifest.write(&path)?;
        eprintln!("wrote {}", self.out.display());
        Ok(())
    }
}

pub fn dispatch(cli: Cli) -> Result<()> {
    let root = cli.out_root.as_deref();
    match cli.command {
        Command::Coefficients { d, n, alpha, f0, cache } => coefficients(d, n, alpha, f0, cache.as_deref()),
        Command::Ibm {
            common,
            preset,
            n,
            epsilon,
            dt,
            t_final,
            realizations,
            snapshots,
        } => {
            let kind = match preset {
                ParticlePreset::Riemann => ExperimentKind::MicroMacro,
                ParticlePreset::TaylorGreen => ExperimentKind::TaylorGreen,
            };
            let mut c = base_config(&common, Some(kind), kind)?;
            set_final_time(&mut c, t_final);
            if let Some(times) = snapshots {
                c.snapshot_times = times;
            }
            set_ibm(&mut c, n, epsilon.map(|e| vec![e]), realizations)?;
            if let Some(dt) = dt {
                c.ibm.as_mut().expect("checked by set_ibm").dt = Some(dt);
            }
            ibm(Session::open(c, &common, root, "ibm")?)
        }
        Command::Sohr {
            run,
            preset,
            mode,
            flux,
            f0,
        } => {
            let kind = preset.map(|p| match p {
                FieldPreset::Vortex => ExperimentKind::Convergence,
                FieldPreset::Riemann => ExperimentKind::Riemann,
                FieldPreset::TaylorGreen => ExperimentKind::TaylorGreen,
                FieldPreset::FourVortex => ExperimentKind::FourVortex,
            });
            let mut c = base_config(&run.common, kind, ExperimentKind::Convergence)?;
            if let Some(m) = mode {
                c.hydro.mode = m.into();
            }
            if let Some(f) = flux {
                c.hydro.flux = f.into();
            }
            if let Some(f0) = f0 {
                c.hydro.f0 = f0;
            }
            field_run(c, &run, root, "sohr")
        }
        Command::Riemann { run } => {
            let c = base_config(&run.common, Some(ExperimentKind::Riemann), ExperimentKind::Riemann)?;
            field_run(c, &run, root, "riemann")
        }
        Command::Convergence {
            common,
            timing,
            nx,
            levels,
        } => {
            let kind = ExperimentKind::Convergence;
            let mut c = base_config(&common, Some(kind), kind)?;
            apply_timing(&mut c, &timing);
            apply_mesh(&mut c, &square_mesh(nx))?;
            if let Some(l) = levels {
                c.levels = l;
            }
            convergence(Session::open(c, &common, root, "convergence")?)
        }
        Command::TaylorGreen {
            common,
            n,
            epsilon,
            realizations,
            t_final,
        } => {
            let kind = ExperimentKind::TaylorGreen;
            let mut c = base_config(&common, Some(kind), kind)?;
            set_final_time(&mut c, t_final);
            set_ibm(&mut c, n, epsilon.map(|e| vec![e]), realizations)?;
            taylor_green(Session::open(c, &common, root, "taylor-green")?)
        }
        Command::CompareMicroMacro {
            common,
            n,
            epsilons,
            realizations,
            t_final,
            full,
        } => {
            let kind = ExperimentKind::MicroMacro;
            let mut c = base_config(&common, Some(kind), kind)?;
            if full {
                let g = c.grid;
                c.grid = GridSpec::with_spacing(g.lx, 10.0, g.dx(), g.dy(), g.bc)?;
                set_ibm(&mut c, Some(100_000), None, None)?;
            }
            set_final_time(&mut c, t_final);
            set_ibm(&mut c, n, epsilons, realizations)?;
            micro_macro(Session::open(c, &common, root, "compare-micro-macro")?)
        }
        Command::CompareRepulsion {
            common,
            timing,
            nx,
            strong_f0,
            weak_f0,
        } => {
            let kind = ExperimentKind::FourVortex;
            let mut c = base_config(&common, Some(kind), kind)?;
            apply_timing(&mut c, &timing);
            apply_mesh(&mut c, &square_mesh(nx))?;
            repulsion(Session::open(c, &common, root, "compare-repulsion")?, strong_f0, weak_f0)
        }
        Command::CompareDlmp {
            common,
            timing,
            nx,
            f0,
        } => {
            let kind = ExperimentKind::DlmpCompare;
            let mut c = base_config(&common, Some(kind), kind)?;
            apply_timing(&mut c, &timing);
            apply_mesh(&mut c, &square_mesh(nx))?;
            if let Some(f0) = f0 {
                c.hydro.f0 = f0;
            }
            dlmp(Session::open(c, &common, root, "compare-dlmp")?)
        }
    }
}

fn coefficients(d: f64, n: usize, alpha: f64, f0: f64, cache: Option<&Path>) -> Result<()> {
    let alignment = KernelSpec::indicator_ball(1.0).normalized(n);
    let potential = KernelSpec::quadratic_well(1.0).scaled(f0);
    let start = Instant::now();
    let coefficients = match cache {
        None => Coefficients::compute(d, n, alpha, &alignment, &potential)?,
        Some(path) => {
            let mut table = CoefficientCache::load(path)?;
            let row = table.get_or_compute(d, n, TABULATION_GRID)?;
            table.save(path)?;
            let k0 = sohrlab_core::gci::kernel_moment_k0(&alignment, n);
            let phi0 = sohrlab_core::gci::potential_mass_phi0(&potential, n);
            Coefficients {
                d,
                n,
                c1: row.c1,
                c2: row.c2,
                k0,
                phi0,
                betas: row.betas(alpha, phi0, k0),
            }
        }
    };
    println!("{}", Coefficients::csv_header());
    println!("{}", coefficients.csv_row());
    eprintln!("computed in {:.3} s", start.elapsed().as_secs_f64());
    Ok(())
}

fn field_run(mut c: ExperimentConfig, run_args: &FieldRun, root: Option<&Path>, command: &str) -> Result<()> {
    apply_timing(&mut c, &run_args.timing);
    apply_mesh(&mut c, &run_args.mesh)?;
    if let Some(eta) = run_args.eta {
        c.eta = eta;
    }
    if let Some(times) = &run_args.snapshots {
        c.snapshot_times = times.clone();
    }
    let mut s = Session::open(c, &run_args.common, root, command)?;
    let (initial, defaulted) = s.config.preset.initial_data().field(s.config.grid);
    let output = run(&initial, &s.config.run_spec())?;
    for snap in &output.snapshots {
        s.snapshot("field", snap)?;
    }
    let st = &output.stats;
    s.record("initial_data", s.config.preset.initial_data().as_str());
    s.record("defaulted_cells", defaulted);
    s.record("steps", st.steps);
    s.record("fallbacks", st.fallbacks);
    s.record("complex_spectra", st.complex_spectra);
    s.record("zero_momentum", st.zero_momentum);
    s.record("lambda_max", format!("{:?}", st.lambda_max));
    s.record("dt_min", format!("{:?}", st.dt_min));
    s.record("dt_max", format!("{:?}", st.dt_max));
    s.record("mass_initial", format!("{:?}", initial.total_mass()));
    s.record("mass_final", format!("{:?}", output.final_state.total_mass()));
    s.record("unit_norm_defect", format!("{:?}", output.final_state.unit_norm_defect()));
    println!(
        "{} steps, {} snapshots, max rho {:.6e}",
        st.steps,
        output.snapshots.len(),
        output.final_state.max_rho()
    );
    s.close()
}

fn ibm(mut s: Session) -> Result<()> {
    let c = s.config.clone();
    let settings = c.ibm.as_ref().context("missing particle settings")?;
    let (lx, ly, n, d) = (c.grid.lx, c.grid.ly, settings.n, c.hydro.d);
    let riemann = c.preset == ExperimentKind::MicroMacro;
    let mass = if riemann {
        c.micro_macro_spec()?.mass()
    } else {
        TAYLOR_GREEN_DENSITY * lx * ly
    };
    let init = |seed| {
        if riemann {
            riemann_particles(lx, ly, n, d, seed)
        } else {
            taylor_green_particles(lx, ly, n, d, seed)
        }
    };
    let mut degenerate = 0;
    for &eps in &settings.epsilons {
        let params = c.ibm_params(eps, mass)?;
        for &t in &c.snapshot_times {
            let ens = ensemble_run(init, &params, &c.grid, t, c.realizations)?;
            degenerate += ens.degenerate;
            let prefix = format!("ibm_eps{eps}");
            s.snapshot(&prefix, &ens.average.mean)?;
            println!(
                "eps {eps}: t = {t}, {} realizations, mass {:.6e}",
                c.realizations,
                ens.average.mean.total_mass()
            );
        }
        s.record(&format!("dt_eps{eps}"), format!("{:?}", params.dt));
    }
    s.record("degenerate_alignments", degenerate);
    s.close()
}

fn convergence(mut s: Session) -> Result<()> {
    let report = convergence_study(&s.config.convergence_spec()?)?;
    let csv = report.to_csv();
    s.text("error_report.csv", &csv)?;
    print!("{csv}");
    for (k, (o_rho, o_cos)) in report.orders().enumerate() {
        s.record(&format!("order_rho_{}", k + 1), format!("{o_rho:?}"));
        s.record(&format!("order_cos_{}", k + 1), format!("{o_cos:?}"));
    }
    s.record("strictly_decreasing", report.strictly_decreasing());
    for (k, t) in report.runtimes.iter().enumerate() {
        s.record(&format!("runtime_{k}"), format!("{t:.3}"));
    }
    s.close()
}

fn taylor_green(mut s: Session) -> Result<()> {
    let spec = s.config.taylor_green_spec()?;
    let cmp = taylor_green_compare(&spec)?;
    s.snapshot("sohr", &cmp.sohr)?;
    s.snapshot("ibm", &cmp.ibm)?;
    let (_, defaulted) = Preset::TaylorGreen.field(s.config.grid);
    s.record("defaulted_cells", defaulted);
    s.record("density_correlation", format!("{:?}", cmp.density_correlation));
    s.record("err_rho", format!("{:?}", cmp.err_rho));
    println!(
        "density correlation {:.4}, relative L1 density error {:.4e}",
        cmp.density_correlation, cmp.err_rho
    );
    s.close()
}

fn micro_macro(mut s: Session) -> Result<()> {
    let spec = s.config.micro_macro_spec()?;
    let table = micro_macro_compare(&spec)?;
    let csv = table.to_csv();
    s.text("micro_macro.csv", &csv)?;
    s.snapshot("sohr", &table.reference)?;
    for (eps, field) in &table.averages {
        s.snapshot(&format!("ibm_eps{eps}"), field)?;
    }
    for &eps in &spec.epsilons {
        if let Some(row) = table.final_row(eps) {
            s.record(&format!("err_rho_eps{eps}"), format!("{:?}", row.err_rho));
            s.record(&format!("err_theta_eps{eps}"), format!("{:?}", row.err_theta));
            println!(
                "eps {eps}: {} realizations, err_rho {:.4e}, err_theta {:.4e}",
                row.realizations, row.err_rho, row.err_theta
            );
        }
    }
    s.record("degenerate_alignments", table.degenerate);
    s.close()
}

fn repulsion(mut s: Session, strong_f0: f64, weak_f0: f64) -> Result<()> {
    let spec = s.config.four_vortex_spec()?;
    let cmp = repulsion_compare(&spec, strong_f0, weak_f0)?;
    s.snapshot(&format!("sohr_F0{strong_f0}"), &cmp.strong)?;
    s.snapshot(&format!("sohr_F0{weak_f0}"), &cmp.weak)?;
    s.snapshot("soh", &cmp.soh)?;
    let (strong, weak) = (cmp.max_rho_strong(), cmp.max_rho_weak());
    s.record("strong_f0", format!("{strong_f0:?}"));
    s.record("weak_f0", format!("{weak_f0:?}"));
    s.record("max_rho_strong", format!("{strong:?}"));
    s.record("max_rho_weak", format!("{weak:?}"));
    s.record("max_rho_soh", format!("{:?}", cmp.soh.max_rho()));
    s.record("weak_vs_soh", format!("{:?}", cmp.weak_vs_soh));
    println!("max rho: F0 = {strong_f0}: {strong:.6}, F0 = {weak_f0}: {weak:.6}");
    s.close()
}

fn dlmp(mut s: Session) -> Result<()> {
    let spec = s.config.four_vortex_spec()?;
    let cmp = dlmp_compare(&spec, s.config.hydro.f0)?;
    s.snapshot("sohr", &cmp.sohr)?;
    s.snapshot("dlmp", &cmp.dlmp)?;
    s.record("difference", format!("{:?}", cmp.difference));
    s.record("sohr_refinement_error", format!("{:?}", cmp.sohr_refinement_error));
    s.record("dlmp_refinement_error", format!("{:?}", cmp.dlmp_refinement_error));
    s.record("separation", format!("{:?}", cmp.separation()));
    println!(
        "difference {:.4e}, refinement errors {:.4e} / {:.4e}, separation {:.2}",
        cmp.difference,
        cmp.sohr_refinement_error,
        cmp.dlmp_refinement_error,
        cmp.separation()
    );
    s.close()
}
