//! The serialized description of a run.
//!
//! Every output file embeds a [`RunConfig`] (as JSON on a `# config:`
//! metadata line) together with the seed that was actually used, so any
//! result can be regenerated from the file alone.  Worker count is
//! deliberately *not* part of the config: results are independent of the
//! degree of parallelism, and recording it would make otherwise identical
//! runs compare unequal.

use serde::{Deserialize, Serialize};

/// Default seed used when `--seed` is not given.
///
/// The bytes spell "choice" in ASCII; any fixed constant would do.  Pass
/// `--seed random` to draw a fresh seed from the operating system (the
/// drawn value is recorded in the output metadata).
pub const DEFAULT_SEED: u64 = 0x6368_6f69_6365;

/// Complete description of one CLI invocation, minus execution details
/// (worker count, progress reporting) that cannot affect the results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Subcommand name: `simulate`, `curve`, `threshold`, `ratio`,
    /// `exact`, `census`, `diagnose`, or `families`.
    pub command: String,
    /// Family instance strings, e.g. `tribes:n=60,s=4`.  Ratio tables may
    /// hold several; most commands hold exactly one; `census` and
    /// `families` hold none.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<String>,
    /// Canonical process descriptor (`solo`, `rchoice:r=2,policy=uniform`,
    /// `rcomplete:r=3`) for commands that run a walk.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub process: Option<String>,
    /// Oracle mode for `exact`: `solo`, `policy`, or `optimal`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// Number of proposals per step for multi-choice processes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    /// Agent policy name for `rchoice` processes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<String>,
    /// Monte Carlo trial count for estimation commands.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    /// Base seed.  When `--seed random` was given this is the value that
    /// was drawn, so reruns from the recorded config are still exact.
    pub seed: u64,
    /// Time grid specification for `curve` (`auto`, `a:b`, `a:b:step`, or
    /// a comma list).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    /// Scales substituted into family templates for `ratio`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ns: Vec<usize>,
    /// Restriction prefix sizes for `diagnose`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub prefixes: Vec<usize>,
    /// Ground-set size for `census`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Step count for `census` (resolved from `--eps` when that was given).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    /// Number of independent repetitions for `census`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    /// Output destination; `-` means standard output.
    pub output: String,
    /// Output format: `csv` or `json`.
    pub format: String,
    /// Optional SVG chart destination for `curve` and `ratio`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<String>,
}

impl RunConfig {
    /// A config with every optional field empty; commands fill in what
    /// they use.
    pub fn new(command: &str, seed: u64, output: &str, format: &str) -> Self {
        RunConfig {
            command: command.to_string(),
            families: Vec::new(),
            process: None,
            mode: None,
            r: None,
            policy: None,
            trials: None,
            seed,
            grid: None,
            ns: Vec::new(),
            prefixes: Vec::new(),
            n: None,
            steps: None,
            reps: None,
            output: output.to_string(),
            format: format.to_string(),
            svg: None,
        }
    }

    /// Serialize to the single-line JSON form used in `# config:` lines.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Parse the JSON form back; inverse of [`RunConfig::to_json`].
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
