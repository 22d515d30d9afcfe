//! Run settings. Precedence: flags, then `GAMMAK_*` environment variables
//! (both handled by clap), then an optional JSON config file, then defaults.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gammak_core::{Caps, ModuleMode};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::exit::Failure;
use crate::io::read_json;
use crate::report;

pub const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Largest carrier |T| for constructions, validation and K-pipelines.
    #[arg(long, global = true, env = "GAMMAK_CAP_CARRIER", value_parser = clap::value_parser!(u64).range(1..))]
    pub cap_carrier: Option<u64>,
    /// Largest idempotent matrix size in the projective classification.
    #[arg(long, global = true, env = "GAMMAK_CAP_RANK", value_parser = clap::value_parser!(u64).range(1..))]
    pub cap_rank: Option<u64>,
    /// Levels of the automorphism tower for K₁.
    #[arg(long, global = true, env = "GAMMAK_K1_LEVELS", value_parser = clap::value_parser!(u64).range(1..))]
    pub k1_levels: Option<u64>,
    /// Largest module carrier handed to the isomorphism search.
    #[arg(long, global = true, env = "GAMMAK_ISO_CAP", value_parser = clap::value_parser!(u64).range(1..))]
    pub iso_cap: Option<u64>,
    /// Candidate budget for brute-force enumerations.
    #[arg(long, global = true, env = "GAMMAK_BUDGET", value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: Option<u64>,
    #[arg(long, global = true, env = "GAMMAK_SEED")]
    pub seed: Option<u64>,
    #[arg(long, global = true, env = "GAMMAK_FORMAT", value_enum)]
    pub format: Option<Format>,
    /// Require module maps to commute with the left action too.
    #[arg(long, global = true, env = "GAMMAK_STRICT_BIMODULE")]
    pub strict_bimodule: bool,
    /// JSON file with defaults for the settings above.
    #[arg(long, global = true, env = "GAMMAK_CONFIG")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CapsFile {
    carrier: Option<u64>,
    rank: Option<u64>,
    k1_levels: Option<u64>,
    iso_search: Option<u64>,
    budget: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    caps: CapsFile,
    seed: Option<u64>,
    format: Option<Format>,
    strict_bimodule: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub caps: Caps,
    pub seed: u64,
    pub format: Format,
    pub mode: ModuleMode,
}

impl Settings {
    pub fn resolve(g: &GlobalOpts) -> Result<Self, Failure> {
        let file: ConfigFile = match &g.config {
            Some(p) => read_json(p)?,
            None => ConfigFile::default(),
        };
        let d = Caps::default();
        let pick = |flag: Option<u64>, file: Option<u64>, name: &str, default: u64| -> Result<u64, Failure> {
            let v = flag.or(file).unwrap_or(default);
            if v == 0 {
                return Err(Failure::invalid("invalid-config", format!("{name} must be positive")));
            }
            Ok(v)
        };
        let size = |v: u64| usize::try_from(v).unwrap_or(usize::MAX);
        let caps = Caps {
            carrier: size(pick(g.cap_carrier, file.caps.carrier, "carrier cap", d.carrier as u64)?),
            rank: size(pick(g.cap_rank, file.caps.rank, "rank cap", d.rank as u64)?),
            k1_levels: size(pick(g.k1_levels, file.caps.k1_levels, "k1 levels", d.k1_levels as u64)?),
            iso: size(pick(g.iso_cap, file.caps.iso_search, "iso cap", d.iso as u64)?),
            budget: pick(g.budget, file.caps.budget, "budget", d.budget)?,
        };
        let strict = g.strict_bimodule || file.strict_bimodule.unwrap_or(false);
        Ok(Settings {
            caps,
            seed: g.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            format: g.format.or(file.format).unwrap_or(Format::Text),
            mode: if strict { ModuleMode::StrictBimodule } else { ModuleMode::Right },
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "caps": report::caps(&self.caps),
            "seed": self.seed,
            "mode": report::mode(self.mode),
        })
    }
}
