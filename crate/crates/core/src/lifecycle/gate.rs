//! Gate decisions and the seven-criterion scorecard every decision carries.

use serde::{Deserialize, Serialize};

use super::{LifecycleError, StageId};

/// Ordinal score on the 1..=5 scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Score(u8);

impl Score {
    pub fn new(value: u8) -> Result<Score, LifecycleError> {
        if (1..=5).contains(&value) {
            Ok(Score(value))
        } else {
            Err(LifecycleError::ScoreOutOfRange { value })
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for Score {
    type Error = LifecycleError;
    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Score::new(value)
    }
}

impl From<Score> for u8 {
    fn from(s: Score) -> u8 {
        s.0
    }
}

impl std::fmt::Display for Score {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One scored criterion: the ordinal score plus a free-text note.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionScore {
    pub score: Score,
    pub note: String,
}

impl CriterionScore {
    pub fn new(score: Score, note: impl Into<String>) -> CriterionScore {
        CriterionScore {
            score,
            note: note.into(),
        }
    }
}

/// The seven criteria a gate meeting scores before deciding.
///
/// Modeled as a struct rather than a map so a decision cannot be recorded
/// with an entry missing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCriteria {
    pub deliverables_check: CriterionScore,
    pub minimum_standards: CriterionScore,
    pub profitability_potential: CriterionScore,
    pub competitive_advantage: CriterionScore,
    pub technical_feasibility: CriterionScore,
    pub scalability: CriterionScore,
    pub risk: CriterionScore,
}

impl GateCriteria {
    pub const CRITERION_NAMES: [&'static str; 7] = [
        "deliverables_check",
        "minimum_standards",
        "profitability_potential",
        "competitive_advantage",
        "technical_feasibility",
        "scalability",
        "risk",
    ];

    /// Builds a scorecard from seven scores in [`Self::CRITERION_NAMES`]
    /// order, with empty notes.
    pub fn from_scores(scores: [Score; 7]) -> GateCriteria {
        GateCriteria {
            deliverables_check: CriterionScore::new(scores[0], ""),
            minimum_standards: CriterionScore::new(scores[1], ""),
            profitability_potential: CriterionScore::new(scores[2], ""),
            competitive_advantage: CriterionScore::new(scores[3], ""),
            technical_feasibility: CriterionScore::new(scores[4], ""),
            scalability: CriterionScore::new(scores[5], ""),
            risk: CriterionScore::new(scores[6], ""),
        }
    }

    /// The entries in declaration order, paired with their names.
    pub fn entries(&self) -> [(&'static str, &CriterionScore); 7] {
        [
            ("deliverables_check", &self.deliverables_check),
            ("minimum_standards", &self.minimum_standards),
            ("profitability_potential", &self.profitability_potential),
            ("competitive_advantage", &self.competitive_advantage),
            ("technical_feasibility", &self.technical_feasibility),
            ("scalability", &self.scalability),
            ("risk", &self.risk),
        ]
    }
}

/// Outcome of a gate meeting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateDecision {
    /// Go on to the next stage of the waterfall.
    Go,
    /// Kill the project entirely (terminal).
    Kill,
    /// Hold development at the current gate for later reconsideration.
    Hold,
    /// Return to an earlier stage for additional research or testing.
    Return { target: StageId },
}

impl std::fmt::Display for GateDecision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GateDecision::Go => write!(f, "go"),
            GateDecision::Kill => write!(f, "kill"),
            GateDecision::Hold => write!(f, "hold"),
            GateDecision::Return { target } => write!(f, "return to stage {target}"),
        }
    }
}
