//! Run configuration: TOML file, CLI overrides, and the resolved parameter
//! set. Precedence is defaults < file < flags; unknown file keys are
//! rejected so typos cannot silently fall back to defaults.

use serde::Deserialize;

use zeno_core::params::ModelParams;

pub const SCHEMA_VERSION: u32 = 1;

/// On-disk configuration. All sections optional; defaults are the reference
/// experiment (Delta = 0, xi = 1, g = 0.25, nu = 10, L = 41, Omega = 0).
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub schema_version: Option<u32>,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub numerics: NumericsSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub omega_c: Option<f64>,
    pub omega_a: Option<f64>,
    pub amplitude: Option<f64>,
    /// Omega/nu; wins over `amplitude` when both are given.
    pub ratio: Option<f64>,
    pub nu: Option<f64>,
    pub xi: Option<f64>,
    pub g: Option<f64>,
    pub sites: Option<usize>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsSection {
    /// RK4 step (units of 1/xi).
    pub dt: Option<f64>,
    /// Slices per drive period for the Floquet propagator.
    pub slice_divisor: Option<u32>,
    /// Temporal truncation M; 0 means the doubling convergence rule.
    pub floquet_m: Option<usize>,
    /// Cap on the extended-space dimension.
    pub dim_cap: Option<usize>,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Default output directory (overridden by --out-dir / ZENO_OUT_DIR).
    pub dir: Option<String>,
    pub format: Option<String>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: FileConfig =
            toml::from_str(text).map_err(|e| format!("config parse error: {e}"))?;
        if let Some(v) = cfg.schema_version {
            if v != SCHEMA_VERSION {
                return Err(format!(
                    "unsupported schema_version {v} (this build reads {SCHEMA_VERSION})"
                ));
            }
        }
        Ok(cfg)
    }
}

/// Numeric knobs after resolution.
#[derive(Debug, Clone, Copy)]
pub struct Numerics {
    /// None means "not set explicitly": commands fall back to their own
    /// default (1e-3 generally, tighter for the large-amplitude scan).
    pub dt: Option<f64>,
    pub slice_divisor: u32,
    /// None selects the doubling convergence rule.
    pub floquet_m: Option<usize>,
    pub dim_cap: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            dt: None,
            slice_divisor: zeno_core::dynamics::DEFAULT_SLICE_DIVISOR,
            floquet_m: None,
            dim_cap: zeno_core::dynamics::DEFAULT_DIM_CAP,
        }
    }
}

/// Merge order: reference defaults, then the file, then CLI values.
pub fn resolve_model(file: &ModelSection, cli: &ModelSection) -> Result<ModelParams, String> {
    let base = ModelParams::reference();
    let pick = |c: Option<f64>, f: Option<f64>, d: f64| c.or(f).unwrap_or(d);
    let omega_c = pick(cli.omega_c, file.omega_c, base.omega_c);
    let omega_a = pick(cli.omega_a, file.omega_a, base.omega_a);
    let nu = pick(cli.nu, file.nu, base.nu);
    let xi = pick(cli.xi, file.xi, base.xi);
    let g = pick(cli.g, file.g, base.g);
    let sites = cli.sites.or(file.sites).unwrap_or(base.sites);
    // ratio wins over amplitude at the same precedence level.
    let amplitude = match (cli.ratio, cli.amplitude) {
        (Some(r), _) => r * nu,
        (None, Some(a)) => a,
        (None, None) => match (file.ratio, file.amplitude) {
            (Some(r), _) => r * nu,
            (None, Some(a)) => a,
            (None, None) => base.amplitude,
        },
    };
    ModelParams::new(omega_c, omega_a, amplitude, nu, xi, g, sites).map_err(|e| e.to_string())
}

pub fn resolve_numerics(file: &NumericsSection, cli: &NumericsSection) -> Result<Numerics, String> {
    let d = Numerics::default();
    let dt = cli.dt.or(file.dt);
    if let Some(dt) = dt {
        if !(dt > 0.0) {
            return Err(format!("dt must be > 0, got {dt}"));
        }
    }
    let slice_divisor = cli
        .slice_divisor
        .or(file.slice_divisor)
        .unwrap_or(d.slice_divisor);
    if slice_divisor == 0 {
        return Err("slice_divisor must be >= 1".into());
    }
    let floquet_m = match cli.floquet_m.or(file.floquet_m) {
        None | Some(0) => None,
        Some(m) => Some(m),
    };
    let dim_cap = cli.dim_cap.or(file.dim_cap).unwrap_or(d.dim_cap);
    if dim_cap == 0 {
        return Err("dim_cap must be >= 1".into());
    }
    Ok(Numerics {
        dt,
        slice_divisor,
        floquet_m,
        dim_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_keys() {
        let err = FileConfig::parse("banana = 3\n").unwrap_err();
        assert!(err.contains("config parse error"), "{err}");
        let err = FileConfig::parse("[model]\ncoupling = 0.2\n").unwrap_err();
        assert!(err.contains("config parse error"), "{err}");
    }

    #[test]
    fn rejects_wrong_schema() {
        assert!(FileConfig::parse("schema_version = 99\n").is_err());
        assert!(FileConfig::parse("schema_version = 1\n").is_ok());
    }

    #[test]
    fn ratio_wins_over_amplitude() {
        let file = FileConfig::parse("[model]\nratio = 2.0\namplitude = 3.0\n").unwrap();
        let p = resolve_model(&file.model, &ModelSection::default()).unwrap();
        assert_eq!(p.amplitude, 20.0);
    }

    #[test]
    fn cli_overrides_file() {
        let file = FileConfig::parse("[model]\ng = 0.5\nxi = 2.0\n").unwrap();
        let cli = ModelSection {
            g: Some(0.75),
            ..Default::default()
        };
        let p = resolve_model(&file.model, &cli).unwrap();
        assert_eq!(p.g, 0.75);
        assert_eq!(p.xi, 2.0);
    }

    #[test]
    fn defaults_are_reference_parameters() {
        let p = resolve_model(&ModelSection::default(), &ModelSection::default()).unwrap();
        assert_eq!(p, ModelParams::reference());
        let n = resolve_numerics(&NumericsSection::default(), &NumericsSection::default()).unwrap();
        assert!(n.dt.is_none());
        assert_eq!(n.slice_divisor, 32);
        assert!(n.floquet_m.is_none());
    }

    #[test]
    fn invalid_model_values_rejected() {
        let cli = ModelSection {
            sites: Some(40),
            ..Default::default()
        };
        assert!(resolve_model(&ModelSection::default(), &cli).is_err());
    }
}
