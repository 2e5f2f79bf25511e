use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sdic_core::sweep::ParamSet;
use sdic_core::{Channel, LogBase};

use crate::CliError;

/// Capacity conditions and rate regions for Gaussian interference channels
/// with correlated states known at both transmitters.
#[derive(Debug, Parser)]
#[command(name = "sdic", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the interference regime.
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ChannelArg::Ic)]
        channel: ChannelArg,
    },
    /// Very strong IC: cooperative dirty-paper conditions.
    VsIc {
        #[command(flatten)]
        common: Common,
    },
    /// Very strong Z-IC condition (b = 0).
    VsZic {
        #[command(flatten)]
        common: Common,
    },
    /// Strong IC: can the sum-capacity point selected by --p1dp be reached?
    StrongIc {
        #[command(flatten)]
        common: Common,
    },
    /// Strong Z-IC: same question for the Z channel (b = 0).
    StrongZic {
        #[command(flatten)]
        common: Common,
    },
    /// Weak-regime sum capacity.
    Weak {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = ChannelArg::Ic)]
        channel: ChannelArg,
    },
    /// Evaluate a check over a 1-D or 2-D parameter grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// vs-ic, vs-ic-curves, vs-zic, strong-ic, strong-zic,
        /// classify[-ic|-zic], weak[-ic|-zic]
        #[arg(long)]
        check: String,
        /// name:lo:hi:steps (give once or twice)
        #[arg(long = "axis", required = true)]
        axes: Vec<String>,
    },
    /// Certified segment of the strong Z-IC sum-capacity line.
    Segment {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = sdic_core::strong::DEFAULT_SPLIT_STEPS)]
        steps: usize,
    },
    /// Compare exact MI values against Monte-Carlo plug-in estimates.
    ValidateMc {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = SceneArg::VsIc)]
        scene: SceneArg,
        #[arg(long, default_value_t = sdic_core::mc::DEFAULT_SAMPLES)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tolerance for single MI terms (bits, or nats with --nats).
        #[arg(long, default_value_t = sdic_core::mc::MI_TOL_BITS)]
        tol: f64,
        /// Tolerance for composite identities.
        #[arg(long, default_value_t = sdic_core::mc::COMPOSITE_TOL_BITS)]
        composite_tol: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelArg {
    Ic,
    Zic,
}

impl From<ChannelArg> for Channel {
    fn from(c: ChannelArg) -> Self {
        match c {
            ChannelArg::Ic => Channel::Ic,
            ChannelArg::Zic => Channel::Zic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SceneArg {
    VsIc,
    VsZic,
    StrongIc,
    StrongZic,
}

/// Channel parameters and output options shared by every subcommand.
#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub p2: Option<f64>,
    #[arg(long)]
    pub q1: Option<f64>,
    #[arg(long)]
    pub q2: Option<f64>,
    /// State correlation coefficient.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// Slope of S1 = d·S2 + S1'.
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<f64>,
    /// Slope of S2 = c·S1 + S2'.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Residual variance Q1' (with --d).
    #[arg(long)]
    pub q1p: Option<f64>,
    /// Residual variance Q2' (with --c).
    #[arg(long)]
    pub q2p: Option<f64>,
    /// Private power P1'' of the strong-regime split.
    #[arg(long)]
    pub p1dp: Option<f64>,
    /// `key = value` parameter file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write CSV here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, conflicts_with = "nats")]
    pub bits: bool,
    #[arg(long)]
    pub nats: bool,
}

impl Common {
    pub fn base(&self) -> LogBase {
        if self.nats {
            LogBase::NATS
        } else {
            LogBase::BITS
        }
    }

    pub fn unit(&self) -> &'static str {
        if self.nats {
            "nats"
        } else {
            "bits"
        }
    }

    fn flags(&self) -> [(&'static str, Option<f64>); 12] {
        [
            ("a", self.a),
            ("b", self.b),
            ("p1", self.p1),
            ("p2", self.p2),
            ("q1", self.q1),
            ("q2", self.q2),
            ("rho", self.rho),
            ("d", self.d),
            ("c", self.c),
            ("q1p", self.q1p),
            ("q2p", self.q2p),
            ("p1dp", self.p1dp),
        ]
    }

    /// Parameters from the config file overlaid with command-line flags.
    ///
    /// A correlation flag (`rho`, `d`, `c`) replaces any correlation given
    /// in the file, together with the residual variances that belong to it.
    pub fn params(&self) -> Result<ParamSet, CliError> {
        let mut set = match &self.config {
            Some(path) => read_config(path)?,
            None => ParamSet::new(),
        };
        let mut flags = ParamSet::new();
        for (name, v) in self.flags() {
            if let Some(v) = v {
                flags.set(name, v).map_err(CliError::Domain)?;
            }
        }
        if ["rho", "d", "c"].iter().any(|n| flags.contains(n)) {
            let mut kept = ParamSet::new();
            for (k, v) in set.iter() {
                if !["rho", "d", "c", "q1p", "q2p"].contains(&k) {
                    kept.set(k, v).map_err(CliError::Domain)?;
                }
            }
            set = kept;
        }
        Ok(set.merged(&flags))
    }
}

fn read_config(path: &std::path::Path) -> Result<ParamSet, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    let mut set = ParamSet::new();
    for (key, value) in &table {
        let v = match value {
            toml::Value::Float(f) => *f,
            toml::Value::Integer(i) => *i as f64,
            other => {
                return Err(CliError::Usage(format!(
                    "config {}: `{key}` must be a number, got {other}",
                    path.display()
                )))
            }
        };
        set.set(key, v)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    }
    Ok(set)
}
