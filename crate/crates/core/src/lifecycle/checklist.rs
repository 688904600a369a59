//! Checklist templates bound to workflow addresses.
//!
//! Two templates ship with the engine: the eleven-step Excel prototype loop
//! and the six-step crossover loop. Each item is bound to the position at
//! which it may be marked done.

use serde::{Deserialize, Serialize};

use super::{GateId, StageId, StepAddress};

/// Identifies one of the built-in checklist templates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateId {
    ExcelPrototypeLoop,
    CrossoverLoop,
}

impl std::fmt::Display for TemplateId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TemplateId::ExcelPrototypeLoop => write!(f, "excel_prototype_loop"),
            TemplateId::CrossoverLoop => write!(f, "crossover_loop"),
        }
    }
}

/// Where a checklist item may be marked done.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChecklistBinding {
    /// At a specific step address.
    Step(StepAddress),
    /// At the Stage I intra-stage gate.
    IntraStageGate,
    /// While standing at the given gate.
    Gate(GateId),
    /// Position-independent handoff note (any active, non-held position).
    Handoff,
}

impl std::fmt::Display for ChecklistBinding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChecklistBinding::Step(addr) => write!(f, "{addr}"),
            ChecklistBinding::IntraStageGate => write!(f, "intra-stage gate"),
            ChecklistBinding::Gate(g) => write!(f, "{g}"),
            ChecklistBinding::Handoff => write!(f, "handoff"),
        }
    }
}

/// One checklist item.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChecklistItem {
    pub id: u8,
    pub title: &'static str,
    pub binding: ChecklistBinding,
}

/// A named, ordered checklist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChecklistTemplate {
    pub id: TemplateId,
    pub items: &'static [ChecklistItem],
}

impl ChecklistTemplate {
    pub fn item(&self, id: u8) -> Option<&'static ChecklistItem> {
        self.items.iter().find(|item| item.id == id)
    }
}

const fn step(stage: StageId, step: u8) -> ChecklistBinding {
    ChecklistBinding::Step(StepAddress::new_const(stage, step))
}

static EXCEL_PROTOTYPE_ITEMS: [ChecklistItem; 11] = [
    ChecklistItem { id: 1, title: "Statement of objective", binding: step(StageId::I, 1) },
    ChecklistItem { id: 2, title: "Data requirements and feeds", binding: step(StageId::I, 2) },
    ChecklistItem { id: 3, title: "Derive calculations", binding: step(StageId::I, 2) },
    ChecklistItem { id: 4, title: "Lay out user interface", binding: step(StageId::I, 3) },
    ChecklistItem { id: 5, title: "Prototype calculations", binding: step(StageId::I, 3) },
    ChecklistItem { id: 6, title: "Test for user requirements", binding: step(StageId::I, 4) },
    ChecklistItem { id: 7, title: "Vision and scope document", binding: step(StageId::I, 1) },
    ChecklistItem { id: 8, title: "Compare alternative methods", binding: step(StageId::I, 2) },
    ChecklistItem { id: 9, title: "Consolidated prototype build", binding: step(StageId::I, 3) },
    ChecklistItem { id: 10, title: "Test results against scope", binding: step(StageId::I, 4) },
    ChecklistItem {
        id: 11,
        title: "Deliver prototype to end users",
        binding: ChecklistBinding::IntraStageGate,
    },
];

static CROSSOVER_ITEMS: [ChecklistItem; 6] = [
    ChecklistItem { id: 1, title: "Expanded vision and scope document", binding: step(StageId::I, 1) },
    ChecklistItem { id: 2, title: "Convert cell logic to coded functions", binding: step(StageId::I, 3) },
    ChecklistItem { id: 3, title: "Lock controls and sheet editing", binding: step(StageId::I, 3) },
    ChecklistItem { id: 4, title: "Deliver secured build to traders", binding: step(StageId::I, 4) },
    ChecklistItem {
        id: 5,
        title: "Reevaluate product usefulness",
        binding: ChecklistBinding::Gate(GateId::new_const(1)),
    },
    ChecklistItem {
        id: 6,
        title: "Package handoff for production build",
        binding: ChecklistBinding::Handoff,
    },
];

static EXCEL_TEMPLATE: ChecklistTemplate = ChecklistTemplate {
    id: TemplateId::ExcelPrototypeLoop,
    items: &EXCEL_PROTOTYPE_ITEMS,
};

static CROSSOVER_TEMPLATE: ChecklistTemplate = ChecklistTemplate {
    id: TemplateId::CrossoverLoop,
    items: &CROSSOVER_ITEMS,
};

/// Looks up a built-in template.
pub fn template(id: TemplateId) -> &'static ChecklistTemplate {
    match id {
        TemplateId::ExcelPrototypeLoop => &EXCEL_TEMPLATE,
        TemplateId::CrossoverLoop => &CROSSOVER_TEMPLATE,
    }
}

/// All built-in templates in a fixed order.
pub fn all_templates() -> [&'static ChecklistTemplate; 2] {
    [&EXCEL_TEMPLATE, &CROSSOVER_TEMPLATE]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn excel_loop_bindings_follow_the_published_annotations() {
        let t = template(TemplateId::ExcelPrototypeLoop);
        assert_eq!(t.items.len(), 11);
        let expect_step = |id: u8, step_no: u8| {
            let item = t.item(id).unwrap();
            match item.binding {
                ChecklistBinding::Step(addr) => {
                    assert_eq!(addr.stage, StageId::I, "item {id}");
                    assert_eq!(addr.step.get(), step_no, "item {id}");
                }
                other => panic!("item {id} bound to {other:?}"),
            }
        };
        for id in [1, 7] {
            expect_step(id, 1);
        }
        for id in [2, 3, 8] {
            expect_step(id, 2);
        }
        for id in [4, 5, 9] {
            expect_step(id, 3);
        }
        for id in [6, 10] {
            expect_step(id, 4);
        }
        assert_eq!(t.item(11).unwrap().binding, ChecklistBinding::IntraStageGate);
    }

    #[test]
    fn crossover_loop_bindings_follow_the_published_annotations() {
        let t = template(TemplateId::CrossoverLoop);
        assert_eq!(t.items.len(), 6);
        let step_of = |id: u8| match t.item(id).unwrap().binding {
            ChecklistBinding::Step(addr) => (addr.stage, addr.step.get()),
            other => panic!("item {id} bound to {other:?}"),
        };
        assert_eq!(step_of(1), (StageId::I, 1));
        assert_eq!(step_of(2), (StageId::I, 3));
        assert_eq!(step_of(3), (StageId::I, 3));
        assert_eq!(step_of(4), (StageId::I, 4));
        assert!(matches!(t.item(5).unwrap().binding, ChecklistBinding::Gate(g) if g.get() == 1));
        assert_eq!(t.item(6).unwrap().binding, ChecklistBinding::Handoff);
    }

    #[test]
    fn unknown_items_are_absent() {
        assert!(template(TemplateId::ExcelPrototypeLoop).item(12).is_none());
        assert!(template(TemplateId::CrossoverLoop).item(0).is_none());
    }
}
