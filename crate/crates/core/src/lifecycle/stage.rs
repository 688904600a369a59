//! Stages, steps, and the "K|V s.n" addressing shorthand.

use serde::{Deserialize, Serialize};

use super::LifecycleError;

/// The four waterfall stages. Each owns exactly four named steps; stages
/// advance only through gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StageId {
    I,
    II,
    III,
    IV,
}

impl StageId {
    pub const ALL: [StageId; 4] = [StageId::I, StageId::II, StageId::III, StageId::IV];

    /// 1-based stage number.
    pub fn number(self) -> u8 {
        match self {
            StageId::I => 1,
            StageId::II => 2,
            StageId::III => 3,
            StageId::IV => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<StageId> {
        match n {
            1 => Some(StageId::I),
            2 => Some(StageId::II),
            3 => Some(StageId::III),
            4 => Some(StageId::IV),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StageId::I => "Research and Document Calculations",
            StageId::II => "Back Test",
            StageId::III => "Implement",
            StageId::IV => "Manage Portfolio and Risk",
        }
    }

    pub fn step_names(self) -> [&'static str; 4] {
        match self {
            StageId::I => [
                "Describe Trading Idea",
                "Research Quantitative Methods",
                "Prototype in Excel",
                "Check Performance",
            ],
            StageId::II => [
                "Gather Historical Data",
                "Develop Cleaning Algorithms",
                "Perform In Sample / Out of Sample Tests",
                "Shadow Trade and Check Performance",
            ],
            StageId::III => [
                "Build Software Requirements Specification Document",
                "Design and Document System Architecture",
                "Program and Document the System",
                "Probationary Trade and Check Performance",
            ],
            StageId::IV => [
                "Monitor Portfolio Statistics",
                "Perform Risk Calculations",
                "Document Profit and Loss Attribution",
                "Determine Causes of Variation in Performance",
            ],
        }
    }

    pub fn step_name(self, step: StepNumber) -> &'static str {
        self.step_names()[(step.get() - 1) as usize]
    }

    pub fn next(self) -> Option<StageId> {
        StageId::from_number(self.number() + 1)
    }
}

impl std::fmt::Display for StageId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let numeral = match self {
            StageId::I => "I",
            StageId::II => "II",
            StageId::III => "III",
            StageId::IV => "IV",
        };
        f.write_str(numeral)
    }
}

/// Step number within a stage, 1..=4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct StepNumber(u8);

impl StepNumber {
    pub const FIRST: StepNumber = StepNumber(1);
    pub const LAST: StepNumber = StepNumber(4);

    pub fn new(n: u8) -> Result<StepNumber, LifecycleError> {
        if (1..=4).contains(&n) {
            Ok(StepNumber(n))
        } else {
            Err(LifecycleError::StepOutOfRange { value: n })
        }
    }

    pub(crate) const fn new_const(n: u8) -> StepNumber {
        assert!(n >= 1 && n <= 4);
        StepNumber(n)
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn next(self) -> Option<StepNumber> {
        if self.0 < 4 {
            Some(StepNumber(self.0 + 1))
        } else {
            None
        }
    }
}

impl TryFrom<u8> for StepNumber {
    type Error = LifecycleError;
    fn try_from(n: u8) -> Result<Self, Self::Error> {
        StepNumber::new(n)
    }
}

impl From<StepNumber> for u8 {
    fn from(s: StepNumber) -> u8 {
        s.0
    }
}

impl std::fmt::Display for StepNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A stage/step coordinate, rendered in the "K|V s.n" shorthand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StepAddress {
    pub stage: StageId,
    pub step: StepNumber,
}

impl StepAddress {
    pub fn new(stage: StageId, step: StepNumber) -> StepAddress {
        StepAddress { stage, step }
    }

    pub(crate) const fn new_const(stage: StageId, step: u8) -> StepAddress {
        StepAddress {
            stage,
            step: StepNumber::new_const(step),
        }
    }

    pub fn step_name(self) -> &'static str {
        self.stage.step_name(self.step)
    }
}

impl std::fmt::Display for StepAddress {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "K|V {}.{}", self.stage.number(), self.step)
    }
}

/// Gate number, 1..=3. Gate `g` concludes stage `g`; there is no gate after
/// stage IV, whose completion ends the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct GateId(u8);

impl GateId {
    pub fn new(n: u8) -> Result<GateId, LifecycleError> {
        if (1..=3).contains(&n) {
            Ok(GateId(n))
        } else {
            Err(LifecycleError::GateOutOfRange { value: n })
        }
    }

    pub(crate) const fn new_const(n: u8) -> GateId {
        assert!(n >= 1 && n <= 3);
        GateId(n)
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// The stage this gate concludes.
    pub fn stage(self) -> StageId {
        StageId::from_number(self.0).expect("gate numbers are valid stage numbers")
    }

    /// The stage a Go decision advances into.
    pub fn next_stage(self) -> StageId {
        StageId::from_number(self.0 + 1).expect("gates 1..=3 always have a next stage")
    }
}

impl TryFrom<u8> for GateId {
    type Error = LifecycleError;
    fn try_from(n: u8) -> Result<Self, Self::Error> {
        GateId::new(n)
    }
}

impl From<GateId> for u8 {
    fn from(g: GateId) -> u8 {
        g.0
    }
}

impl std::fmt::Display for GateId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Gate {}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_and_step_names_match_the_methodology_listing() {
        assert_eq!(StageId::I.name(), "Research and Document Calculations");
        assert_eq!(StageId::II.name(), "Back Test");
        assert_eq!(StageId::III.name(), "Implement");
        assert_eq!(StageId::IV.name(), "Manage Portfolio and Risk");

        assert_eq!(
            StageId::I.step_names(),
            [
                "Describe Trading Idea",
                "Research Quantitative Methods",
                "Prototype in Excel",
                "Check Performance",
            ]
        );
        assert_eq!(
            StageId::II.step_names(),
            [
                "Gather Historical Data",
                "Develop Cleaning Algorithms",
                "Perform In Sample / Out of Sample Tests",
                "Shadow Trade and Check Performance",
            ]
        );
        assert_eq!(
            StageId::III.step_names(),
            [
                "Build Software Requirements Specification Document",
                "Design and Document System Architecture",
                "Program and Document the System",
                "Probationary Trade and Check Performance",
            ]
        );
        assert_eq!(
            StageId::IV.step_names(),
            [
                "Monitor Portfolio Statistics",
                "Perform Risk Calculations",
                "Document Profit and Loss Attribution",
                "Determine Causes of Variation in Performance",
            ]
        );
    }

    #[test]
    fn address_renders_in_shorthand() {
        let addr = StepAddress::new(StageId::I, StepNumber::new(3).unwrap());
        assert_eq!(addr.to_string(), "K|V 1.3");
        assert_eq!(addr.step_name(), "Prototype in Excel");
    }

    #[test]
    fn step_and_gate_ranges() {
        assert!(StepNumber::new(0).is_err());
        assert!(StepNumber::new(5).is_err());
        assert!(GateId::new(0).is_err());
        assert!(GateId::new(4).is_err());
        assert_eq!(GateId::new(2).unwrap().next_stage(), StageId::III);
        assert_eq!(GateId::new(2).unwrap().stage(), StageId::II);
    }

    #[test]
    fn step_number_round_trips_through_serde() {
        let s: StepNumber = serde_json::from_str("3").unwrap();
        assert_eq!(s.get(), 3);
        assert!(serde_json::from_str::<StepNumber>("9").is_err());
    }
}
