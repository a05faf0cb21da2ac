//! Optional TOML config file. Values here fill in flags the user did not pass;
//! anything left unset falls back to built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub out_dir: Option<PathBuf>,
    pub capacity: CapacitySection,
    pub mi: MiSection,
    pub cocktail: CocktailSection,
    pub simulate: SimulateSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CapacitySection {
    pub snr: Option<Vec<f64>>,
    pub grid: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MiSection {
    pub schemes: Option<Vec<String>>,
    pub grid: Option<String>,
    pub axis: Option<String>,
    pub capacity: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CocktailSection {
    pub ratios: Option<Vec<f64>>,
    pub eta: Option<f64>,
    pub grid: Option<String>,
    pub axis: Option<String>,
    pub plot: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSection {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub eta: Option<f64>,
    pub noise_var: Option<f64>,
    pub n: Option<u64>,
    pub seed: Option<u64>,
    pub mode: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config file {}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections() {
        let cfg: FileConfig = toml::from_str(
            r#"
            out_dir = "results"
            [cocktail]
            ratios = [2.5, 3.5]
            plot = true
            [simulate]
            seed = 9
            mode = "genie"
            "#,
        )
        .unwrap();
        assert_eq!(cfg.out_dir.as_deref(), Some(Path::new("results")));
        assert_eq!(cfg.cocktail.ratios, Some(vec![2.5, 3.5]));
        assert_eq!(cfg.simulate.seed, Some(9));
        assert!(cfg.mi.schemes.is_none());
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(toml::from_str::<FileConfig>("[mi]\nshemes = [\"bpsk\"]\n").is_err());
    }
}
