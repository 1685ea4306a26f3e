//! Text form of [`ExperimentConfig`].

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiment::{ExperimentConfig, ExperimentKind, IbmSettings};
use crate::sohr::{Boundary, FluxScheme, GridSpec, ModelMode, TimeStep};

use super::keyvalue::{Document, Writer};

pub const CONFIG_SECTIONS: [&str; 4] = ["experiment", "grid", "hydro", "ibm"];

fn parse_time_step(s: &str) -> Option<TimeStep> {
    if s == "adaptive" {
        return Some(TimeStep::Adaptive);
    }
    s.parse::<f64>().ok().map(TimeStep::Fixed)
}

fn parse_optional_dt(s: &str) -> Option<Option<f64>> {
    if s == "auto" {
        return Some(None);
    }
    s.parse::<f64>().ok().map(Some)
}

/// Reads a configuration from an already parsed document; keys outside the
/// known sections are rejected unless listed in `extra_sections`.
pub(crate) fn config_from_document(doc: &mut Document, extra_sections: &[&str]) -> Result<ExperimentConfig> {
    let allowed: Vec<&str> = CONFIG_SECTIONS.iter().chain(extra_sections).copied().collect();
    doc.reject_sections(&allowed)?;
    let kind = match doc.take_parsed("experiment.preset", "a preset name", ExperimentKind::parse)? {
        Some(k) => k,
        None if doc.is_empty() => {
            return Err(Error::Config(format!(
                "{}: empty configuration; required keys: experiment.preset (one of {})",
                doc.path().display(),
                ExperimentKind::ALL.map(|k| k.as_str()).join(", ")
            )))
        }
        None => {
            return Err(Error::Config(format!(
                "{}: missing required key experiment.preset",
                doc.path().display()
            )))
        }
    };
    let mut c = ExperimentConfig::preset(kind)?;

    if let Some(t) = doc.take_f64("experiment.t_final")? {
        c.t_final = t;
        c.snapshot_times = vec![t];
    }
    if let Some(dt) = doc.take_parsed("experiment.dt", "a number or `adaptive`", parse_time_step)? {
        c.dt = dt;
    }
    if let Some(eta) = doc.take_f64("experiment.eta")? {
        c.eta = eta;
    }
    if let Some(times) = doc.take_f64_list("experiment.snapshot_times")? {
        c.snapshot_times = times;
    }
    if let Some(m) = doc.take_usize("experiment.realizations")? {
        c.realizations = m;
    }
    if let Some(seed) = doc.take_u64("experiment.seed")? {
        c.seed = seed;
    }
    if let Some(levels) = doc.take_usize("experiment.levels")? {
        c.levels = levels;
    }
    if let Some((dir, _)) = doc.take("experiment.output_dir") {
        c.output_dir = PathBuf::from(dir);
    }

    let preset_grid = c.grid;
    let lx = doc.take_f64("grid.lx")?.unwrap_or(preset_grid.lx);
    let ly = doc.take_f64("grid.ly")?.unwrap_or(preset_grid.ly);
    let bc = doc
        .take_parsed("grid.bc", "`periodic` or `dirichlet`", Boundary::parse)?
        .unwrap_or(preset_grid.bc);
    let count = |n: Option<usize>, h: Option<f64>, l: f64, default_h: f64, axis: &str| -> Result<usize> {
        match (n, h) {
            (Some(_), Some(_)) => Err(Error::Config(format!("give either n{axis} or d{axis}, not both"))),
            (Some(n), None) => Ok(n),
            (None, h) => {
                let h = h.unwrap_or(default_h);
                if !(h > 0.0) {
                    return Err(Error::Config(format!("d{axis} must be positive, got {h}")));
                }
                Ok((l / h).round() as usize)
            }
        }
    };
    let (nx, dx) = (doc.take_usize("grid.nx")?, doc.take_f64("grid.dx")?);
    let (ny, dy) = (doc.take_usize("grid.ny")?, doc.take_f64("grid.dy")?);
    let nx = count(nx, dx, lx, preset_grid.dx(), "x")?;
    let ny = count(ny, dy, ly, preset_grid.dy(), "y")?;
    c.grid = GridSpec::new(nx, ny, lx, ly, bc)?;

    let h = &mut c.hydro;
    let d_before = h.d;
    for (key, slot) in [
        ("hydro.v0", &mut h.v0),
        ("hydro.mu", &mut h.mu),
        ("hydro.alpha", &mut h.alpha),
        ("hydro.d", &mut h.d),
        ("hydro.f0", &mut h.f0),
        ("hydro.phi_mass", &mut h.phi_mass),
        ("hydro.k0", &mut h.k0),
        ("hydro.cfl_hyp", &mut h.cfl_hyp),
        ("hydro.cfl_diff", &mut h.cfl_diff),
        ("hydro.dt_max", &mut h.dt_max),
    ] {
        if let Some(v) = doc.take_f64(key)? {
            *slot = v;
        }
    }
    if let Some(m) = doc.take_parsed("hydro.mode", "`sohr`, `soh` or `dlmp`", ModelMode::parse)? {
        h.mode = m;
    }
    if let Some(f) = doc.take_parsed("hydro.flux", "`poly` or `rusanov`", FluxScheme::parse)? {
        h.flux = f;
    }
    if h.d != d_before {
        if !(h.d > 0.0) {
            return Err(Error::Config(format!("hydro.d must be positive, got {}", h.d)));
        }
        h.refresh_coefficients()?;
    }

    if doc.has_section("ibm") {
        let mut ibm = c.ibm.clone().unwrap_or(IbmSettings {
            n: 10_000,
            epsilons: vec![0.05],
            r: 0.0625,
            big_r: 0.25,
            dt: None,
        });
        if let Some(n) = doc.take_usize("ibm.n")? {
            ibm.n = n;
        }
        if let Some(e) = doc.take_f64_list("ibm.epsilons")? {
            ibm.epsilons = e;
        }
        if let Some(r) = doc.take_f64("ibm.r")? {
            ibm.r = r;
        }
        if let Some(r) = doc.take_f64("ibm.big_r")? {
            ibm.big_r = r;
        }
        if let Some(dt) = doc.take_parsed("ibm.dt", "a number or `auto`", parse_optional_dt)? {
            ibm.dt = dt;
        }
        c.ibm = Some(ibm);
    }

    doc.reject_unused(extra_sections)?;
    c.validate()?;
    if let Some(ibm) = &c.ibm {
        for &eps in &ibm.epsilons {
            c.ibm_params(eps, 1.0)?.validate()?;
        }
    }
    Ok(c)
}

pub fn parse_config(text: &str, path: &Path) -> Result<ExperimentConfig> {
    let mut doc = Document::parse(text, path)?;
    config_from_document(&mut doc, &[])
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text, path)
}

pub(crate) fn write_config_into(c: &ExperimentConfig, w: &mut Writer) {
    let dt = match c.dt {
        TimeStep::Fixed(dt) => format!("{dt:?}"),
        TimeStep::Adaptive => "adaptive".into(),
    };
    w.section("experiment")
        .kv("preset", c.preset.as_str())
        .kv("t_final", format!("{:?}", c.t_final))
        .kv("dt", dt)
        .kv("eta", format!("{:?}", c.eta))
        .list("snapshot_times", &c.snapshot_times)
        .kv("realizations", c.realizations)
        .kv("seed", c.seed)
        .kv("levels", c.levels)
        .kv("output_dir", c.output_dir.display());
    w.section("grid")
        .kv("nx", c.grid.nx)
        .kv("ny", c.grid.ny)
        .kv("lx", format!("{:?}", c.grid.lx))
        .kv("ly", format!("{:?}", c.grid.ly))
        .kv("bc", c.grid.bc.as_str());
    let h = &c.hydro;
    w.section("hydro");
    for (k, v) in [
        ("v0", h.v0),
        ("mu", h.mu),
        ("alpha", h.alpha),
        ("d", h.d),
        ("f0", h.f0),
        ("phi_mass", h.phi_mass),
        ("k0", h.k0),
        ("cfl_hyp", h.cfl_hyp),
        ("cfl_diff", h.cfl_diff),
        ("dt_max", h.dt_max),
    ] {
        w.kv(k, format!("{v:?}"));
    }
    w.kv("mode", h.mode.as_str()).kv("flux", h.flux.as_str());
    if let Some(ibm) = &c.ibm {
        w.section("ibm")
            .kv("n", ibm.n)
            .list("epsilons", &ibm.epsilons)
            .kv("r", format!("{:?}", ibm.r))
            .kv("big_r", format!("{:?}", ibm.big_r))
            .kv("dt", ibm.dt.map(|d| format!("{d:?}")).unwrap_or_else(|| "auto".into()));
    }
}

pub fn write_config(c: &ExperimentConfig) -> String {
    let mut w = Writer::default();
    write_config_into(c, &mut w);
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        parse_config(text, Path::new("test.cfg"))
    }

    #[test]
    fn minimal_riemann_uses_reference_values() {
        let c = parse("[experiment]\npreset = riemann\n").unwrap();
        assert_eq!(c.dt, TimeStep::Fixed(0.01));
        assert_eq!((c.grid.nx, c.grid.ny), (40, 40));
        assert!((c.grid.dx() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn empty_file_lists_required_keys() {
        let msg = parse("").unwrap_err().to_string();
        assert!(msg.contains("experiment.preset"), "{msg}");
        let msg = parse("# only a comment\n").unwrap_err().to_string();
        assert!(msg.contains("required keys"), "{msg}");
    }

    #[test]
    fn unknown_keys_and_sections_are_rejected() {
        let e = parse("[experiment]\npreset = riemann\nspeed = 3\n").unwrap_err().to_string();
        assert!(e.contains(":3:") && e.contains("experiment.speed"), "{e}");
        let e = parse("[experiment]\npreset = riemann\n[extra]\n").unwrap_err().to_string();
        assert!(e.contains(":3:"), "{e}");
    }

    #[test]
    fn constraint_violations_are_explained() {
        let e = parse("[experiment]\npreset = convergence\n[grid]\nbc = periodic\n").unwrap_err();
        assert!(e.to_string().contains("requires dirichlet"), "{e}");
    }

    #[test]
    fn round_trip() {
        let text = "[experiment]\npreset = micro-macro\nt_final = 0.5\nseed = 9\n[grid]\ndx = 0.5\n\
                    [hydro]\nd = 0.2\nflux = rusanov\n[ibm]\nn = 500\nepsilons = 1, 0.5\ndt = 0.01\n";
        let c = parse(text).unwrap();
        assert_eq!(c.grid.nx, 20);
        assert_eq!(c.ibm.as_ref().unwrap().dt, Some(0.01));
        let again = parse(&write_config(&c)).unwrap();
        assert_eq!(again, c);
        for k in ExperimentKind::ALL {
            let c = ExperimentConfig::preset(k).unwrap();
            assert_eq!(parse(&write_config(&c)).unwrap(), c, "{}", k.as_str());
        }
    }
}
