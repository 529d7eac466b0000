//! The bundled scenario suite, compiled into the binary.

use std::fs;
use std::path::{Path, PathBuf};

use crate::run::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSource {
    pub name: String,
    pub toml: String,
    pub golden: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Suite {
    pub scenarios: Vec<ScenarioSource>,
}

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(
            (
                $name,
                include_str!(concat!("../scenarios/", $name, ".toml")),
                include_str!(concat!("../scenarios/", $name, ".golden.json")),
            ),
        )*]
    };
}

const BUNDLED: &[(&str, &str, &str)] = bundled![
    "fibonacci-torus",
    "ec-doubling",
    "torsion-only",
    "diagonal-non-dense",
    "product-torsion-ec",
    "product-small-point-ec",
    "translated-torus",
    "square-point",
    "degrees-golden",
    "degrees-abelian-doubling",
    "degrees-mixed",
    "degrees-golden-abelian",
    "degrees-non-dominant",
];

/// Where `--bless` writes when no `--scenarios` directory is given.
pub fn source_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

impl Suite {
    pub fn bundled() -> Suite {
        Suite {
            scenarios: BUNDLED
                .iter()
                .map(|(name, toml, golden)| ScenarioSource {
                    name: name.to_string(),
                    toml: toml.to_string(),
                    golden: Some(golden.to_string()),
                })
                .collect(),
        }
    }

    /// Every `*.toml` in `dir`, sorted by name, with `<name>.golden.json` beside it.
    pub fn from_dir(dir: &Path) -> Result<Suite, CliError> {
        let io = |e: std::io::Error| CliError::Input(format!("cannot read {}: {e}", dir.display()));
        let mut names: Vec<String> = fs::read_dir(dir)
            .map_err(io)?
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                let p = e.path();
                if p.extension()? != "toml" {
                    return None;
                }
                Some(p.file_stem()?.to_string_lossy().into_owned())
            })
            .collect();
        names.sort();
        let mut scenarios = Vec::with_capacity(names.len());
        for name in names {
            let toml = fs::read_to_string(dir.join(format!("{name}.toml"))).map_err(io)?;
            let golden = fs::read_to_string(dir.join(format!("{name}.golden.json"))).ok();
            scenarios.push(ScenarioSource { name, toml, golden });
        }
        Ok(Suite { scenarios })
    }
}
