use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use serde::{Deserialize, Serialize};

/// Raw config file: scenario name, output location, seed and the
/// scenario-specific parameter table.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: String,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub params: toml::Table,
}

impl ConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg: ConfigFile = toml::from_str(&text)
            .with_context(|| format!("config {} does not match the schema", path.display()))?;
        Ok(cfg)
    }

    /// Validates the parameter table against the named scenario's schema.
    pub fn resolve(&self) -> anyhow::Result<Resolved> {
        let scenario = Scenario::from_table(&self.scenario, self.params.clone())?;
        let output_dir = match std::env::var_os("WAVEQC_OUTPUT_DIR") {
            Some(dir) => PathBuf::from(dir),
            None => self.output_dir.clone(),
        };
        Ok(Resolved {
            scenario,
            output_dir,
            seed: self.seed,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Resolved {
    pub scenario: Scenario,
    pub output_dir: PathBuf,
    pub seed: u64,
}

/// One value, an inclusive uniform grid, or an explicit list.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Axis {
    Value(f64),
    Grid { min: f64, max: f64, points: usize },
    List(Vec<f64>),
}

impl Axis {
    pub fn values(&self) -> anyhow::Result<Vec<f64>> {
        match self {
            Axis::Value(v) => Ok(vec![*v]),
            Axis::Grid { min, max, points } => {
                if *points < 2 || !(max > min) {
                    bail!("grid needs points >= 2 and max > min");
                }
                Ok((0..*points)
                    .map(|k| min + (max - min) * k as f64 / (*points - 1) as f64)
                    .collect())
            }
            Axis::List(v) => {
                if v.is_empty() {
                    bail!("axis list must not be empty");
                }
                Ok(v.clone())
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct QeffCurveParams {
    #[serde(default = "one")]
    pub gamma1: f64,
    #[serde(default)]
    pub gamma2: f64,
    /// Gamma / gamma1 axis.
    #[serde(default = "default_ratio_grid")]
    pub gamma_ratio: Axis,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct QeffSpectralSurfaceParams {
    #[serde(default = "one")]
    pub gamma1: f64,
    #[serde(default)]
    pub gamma2: f64,
    /// delta_in in units of gamma1.
    #[serde(default = "one")]
    pub delta_in_over_gamma1: f64,
    #[serde(default = "default_ratio_grid")]
    pub gamma_ratio: Axis,
    /// Input spectral width in units of delta_in.
    #[serde(default = "default_width_grid")]
    pub delta_omega_over_delta_in: Axis,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StorageEchoParams {
    /// Inhomogeneous width parameter (rad/s); sets the natural units below.
    #[serde(default = "one")]
    pub delta_in: f64,
    /// Defaults to the spectral-matching value 2 delta_in.
    pub gamma1: Option<f64>,
    #[serde(default)]
    pub gamma2: f64,
    /// Defaults to the impedance-matching value gamma1.
    pub gamma_ens: Option<f64>,
    #[serde(default = "default_n_spins")]
    pub n_spins: usize,
    /// Gaussian input parameters (seconds); ignored when `input_csv` is set.
    pub pulse_sigma: Option<f64>,
    pub pulse_center: Option<f64>,
    #[serde(default = "one")]
    pub pulse_amplitude: f64,
    /// Carrier offset of the pulse from the line center (rad/s).
    #[serde(default)]
    pub pulse_detuning: f64,
    pub grid_dt: Option<f64>,
    /// Quiet window appended after the pulse before the detuning flip (s).
    pub storage_margin: Option<f64>,
    /// Detuning flip time (s); defaults to just after the storage window.
    pub t_prime: Option<f64>,
    /// Optional input envelope as CSV with columns `t,re` or `t,re,im`.
    pub input_csv: Option<PathBuf>,
    /// Embedded assertion threshold on output/input energy.
    #[serde(default)]
    pub min_retrieval_efficiency: f64,
    /// Assert the echo peaks at the mirrored input peak time.
    #[serde(default = "yes")]
    pub assert_mirrored_peak: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SelfModeParams {
    /// Collective coupling N |g|^2 (rad^2/s^2).
    pub collective_g_sq: f64,
    /// Ensemble constant Gamma (rad/s).
    pub gamma_ens: f64,
    /// Rephasing half-time t_k (s); the packet is centered at 2 t_k.
    pub t_k: f64,
    #[serde(default = "one")]
    pub e0: f64,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct IswapParams {
    /// Collective exchange rate omega_sigma N (rad/s).
    #[serde(default = "default_omega_sigma_n")]
    pub omega_sigma_n: f64,
    #[serde(default = "default_n_atoms_iswap")]
    pub n_atoms: u64,
    /// Number of seeded random qubit pairs to score.
    #[serde(default = "default_pairs")]
    pub pairs: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CdeSolveParams {
    #[serde(default = "default_n_atoms_cde")]
    pub n_atoms: u64,
    /// Condition tuples (n, mu, k).
    #[serde(default = "default_tuples")]
    pub tuples: Vec<[u32; 3]>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SqrtIswapParams {
    #[serde(default = "default_n_atoms_sqrt")]
    pub n_atoms: u64,
    #[serde(default = "default_tuple")]
    pub tuple: [u32; 3],
    /// Exchange coupling omega_sigma (rad/s); sets the SI gate time.
    #[serde(default = "one")]
    pub omega_sigma: f64,
    /// Input pair as four `(re, im)` entries ordered
    /// (alpha2, beta2, alpha3, beta3); defaults to an equal superposition on
    /// qubit 2 and ground on qubit 3.
    pub qubit_pair: Option<[[f64; 2]; 4]>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BlockadeParams {
    #[serde(default = "default_n_atoms_iswap")]
    pub n_atoms: u64,
    #[serde(default = "one")]
    pub omega_sigma: f64,
    /// omega_s in units of N omega_sigma (negative: local channel dominates).
    #[serde(default = "default_blockade_strength")]
    pub omega_s_over_n_omega_sigma: f64,
    /// Sampling window in units of the two-pair oscillation period.
    #[serde(default = "one")]
    pub periods: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OracleValidateParams {
    #[serde(default = "default_n_per_node")]
    pub n_per_node: u32,
    /// Dispersive ratios g sqrt(N) / delta to scan.
    #[serde(default = "default_ratios")]
    pub dispersive_ratio: Axis,
    #[serde(default)]
    pub include_pi: bool,
    /// Local coupling in units of g_sigma (only with include_pi).
    #[serde(default = "one")]
    pub g_pi_over_g_sigma: f64,
    /// Embedded assertion ceilings (skipped when absent).
    pub max_distance: Option<f64>,
    pub max_leakage: Option<f64>,
}

#[derive(Clone, Debug)]
pub enum Scenario {
    QeffCurve(QeffCurveParams),
    QeffSpectralSurface(QeffSpectralSurfaceParams),
    StorageEcho(StorageEchoParams),
    SelfMode(SelfModeParams),
    Iswap(IswapParams),
    CdeSolve(CdeSolveParams),
    SqrtIswap(SqrtIswapParams),
    Blockade(BlockadeParams),
    OracleValidate(OracleValidateParams),
}

pub const SCENARIO_NAMES: [&str; 9] = [
    "qeff-curve",
    "qeff-spectral-surface",
    "storage-echo",
    "self-mode",
    "iswap",
    "cde-solve",
    "sqrt-iswap",
    "blockade",
    "oracle-validate",
];

impl Scenario {
    pub fn from_table(name: &str, params: toml::Table) -> anyhow::Result<Self> {
        let value = toml::Value::Table(params);
        let parse_err = |e: toml::de::Error| anyhow!("params for {name}: {e}");
        Ok(match name {
            "qeff-curve" => Scenario::QeffCurve(value.try_into().map_err(parse_err)?),
            "qeff-spectral-surface" => {
                Scenario::QeffSpectralSurface(value.try_into().map_err(parse_err)?)
            }
            "storage-echo" => Scenario::StorageEcho(value.try_into().map_err(parse_err)?),
            "self-mode" => Scenario::SelfMode(value.try_into().map_err(parse_err)?),
            "iswap" => Scenario::Iswap(value.try_into().map_err(parse_err)?),
            "cde-solve" => Scenario::CdeSolve(value.try_into().map_err(parse_err)?),
            "sqrt-iswap" => Scenario::SqrtIswap(value.try_into().map_err(parse_err)?),
            "blockade" => Scenario::Blockade(value.try_into().map_err(parse_err)?),
            "oracle-validate" => Scenario::OracleValidate(value.try_into().map_err(parse_err)?),
            other => bail!(
                "unknown scenario '{other}'; expected one of {}",
                SCENARIO_NAMES.join(", ")
            ),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::QeffCurve(_) => "qeff-curve",
            Scenario::QeffSpectralSurface(_) => "qeff-spectral-surface",
            Scenario::StorageEcho(_) => "storage-echo",
            Scenario::SelfMode(_) => "self-mode",
            Scenario::Iswap(_) => "iswap",
            Scenario::CdeSolve(_) => "cde-solve",
            Scenario::SqrtIswap(_) => "sqrt-iswap",
            Scenario::Blockade(_) => "blockade",
            Scenario::OracleValidate(_) => "oracle-validate",
        }
    }

    /// Parameter echo for the manifest.
    pub fn params_json(&self) -> serde_json::Value {
        match self {
            Scenario::QeffCurve(p) => serde_json::to_value(p),
            Scenario::QeffSpectralSurface(p) => serde_json::to_value(p),
            Scenario::StorageEcho(p) => serde_json::to_value(p),
            Scenario::SelfMode(p) => serde_json::to_value(p),
            Scenario::Iswap(p) => serde_json::to_value(p),
            Scenario::CdeSolve(p) => serde_json::to_value(p),
            Scenario::SqrtIswap(p) => serde_json::to_value(p),
            Scenario::Blockade(p) => serde_json::to_value(p),
            Scenario::OracleValidate(p) => serde_json::to_value(p),
        }
        .expect("parameter structs serialize")
    }
}

fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn default_ratio_grid() -> Axis {
    Axis::Grid {
        min: 0.0,
        max: 4.0,
        points: 401,
    }
}
fn default_width_grid() -> Axis {
    Axis::Grid {
        min: 0.0,
        max: 1.0,
        points: 51,
    }
}
fn default_n_spins() -> usize {
    2000
}
fn default_omega_sigma_n() -> f64 {
    1.884e6
}
fn default_n_atoms_iswap() -> u64 {
    100
}
fn default_pairs() -> usize {
    100
}
fn default_n_atoms_cde() -> u64 {
    50
}
fn default_n_atoms_sqrt() -> u64 {
    200
}
fn default_tuples() -> Vec<[u32; 3]> {
    vec![[0, 0, 1], [0, 1, 2], [1, 0, 3]]
}
fn default_tuple() -> [u32; 3] {
    [0, 0, 1]
}
fn default_blockade_strength() -> f64 {
    -100.0
}
fn default_samples() -> usize {
    2001
}
fn default_n_per_node() -> u32 {
    3
}
fn default_ratios() -> Axis {
    Axis::List(vec![0.05])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_top_level_key_is_rejected() {
        let text = "scenario = \"iswap\"\noutput_dir = \"out\"\nbogus = 1\n";
        assert!(toml::from_str::<ConfigFile>(text).is_err());
    }

    #[test]
    fn unknown_param_key_is_rejected() {
        let mut table = toml::Table::new();
        table.insert("n_atoms".into(), toml::Value::Integer(10));
        table.insert("typo_key".into(), toml::Value::Integer(1));
        assert!(Scenario::from_table("iswap", table).is_err());
    }

    #[test]
    fn unknown_scenario_is_rejected() {
        assert!(Scenario::from_table("no-such-thing", toml::Table::new()).is_err());
    }

    #[test]
    fn axis_forms_parse() {
        let p: QeffCurveParams =
            toml::Value::Table(toml::from_str("gamma_ratio = [0.5, 1.0, 2.0]").unwrap())
                .try_into()
                .unwrap();
        assert_eq!(p.gamma_ratio.values().unwrap().len(), 3);

        let p: QeffCurveParams = toml::Value::Table(
            toml::from_str("gamma_ratio = { min = 0.0, max = 1.0, points = 5 }").unwrap(),
        )
        .try_into()
        .unwrap();
        assert_eq!(
            p.gamma_ratio.values().unwrap(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );

        let p: QeffCurveParams = toml::Value::Table(toml::from_str("gamma_ratio = 1.5").unwrap())
            .try_into()
            .unwrap();
        assert_eq!(p.gamma_ratio.values().unwrap(), vec![1.5]);
    }

    #[test]
    fn integer_values_fill_float_fields() {
        let p: SelfModeParams = toml::Value::Table(
            toml::from_str("collective_g_sq = 1\ngamma_ens = 1\nt_k = 10").unwrap(),
        )
        .try_into()
        .unwrap();
        assert_eq!(p.collective_g_sq, 1.0);
        assert_eq!(p.t_k, 10.0);
    }
}
