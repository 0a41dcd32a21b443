use serde::Serialize;

use crate::complexes::{ChainMap, Complex, Homotopy};
use crate::modules::{FpModule, ModuleMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Holds,
    Fails,
    HypothesisNotEstablished,
}

/// What backs a verdict.
#[derive(Clone, Debug)]
pub enum Evidence {
    /// Every tested instance was solved; the restriction maps were onto.
    Certified,
    Homotopy(Homotopy),
    Retraction(ChainMap),
    /// `map: A -> C` does not extend along the mono `A -> B`.
    NoExtension { mono: ChainMap, map: ChainMap },
    /// `map: C -> B` does not lift through the epi `A -> B`.
    NoLift { epi: ChainMap, map: ChainMap },
    ModuleNoExtension { mono: ModuleMap, map: ModuleMap },
    ModuleNoLift { epi: ModuleMap, map: ModuleMap },
    /// A component failed the module-level check.
    Component { degree: i32, verdict: Box<Verdict> },
    /// A chain map out of `shift(probe, -1)` that is not null-homotopic,
    /// or a map that should have been.
    NotNullHomotopic { probe: Complex, map: ChainMap },
    /// `Hom(probe, I)` or `Hom(I, probe)` has homology in `degree`.
    Homology { probe: Complex, degree: i32, homology: FpModule },
    /// A map into the middle term killed by `theta` but not coming from `beta`.
    NotInImage { degree: i32, map: ChainMap },
    Hypothesis(String),
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    pub universe: String,
    /// Number of test instances examined.
    pub instances: u64,
    pub evidence: Evidence,
    /// A counterexample was confirmed by exhaustive enumeration, not only by
    /// a second solver.
    pub exhaustive: bool,
    /// For module injectivity: whether the `Ext^1` criterion agreed.
    pub cross_check: Option<bool>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub(crate) fn certified(universe: impl Into<String>, instances: u64) -> Self {
        Self::new(Status::Holds, universe, instances, Evidence::Certified)
    }

    pub(crate) fn fails(universe: impl Into<String>, instances: u64, evidence: Evidence) -> Self {
        Self::new(Status::Fails, universe, instances, evidence)
    }

    pub(crate) fn unestablished(universe: impl Into<String>, why: impl Into<String>) -> Self {
        Self::new(Status::HypothesisNotEstablished, universe, 0, Evidence::Hypothesis(why.into()))
    }

    pub(crate) fn new(status: Status, universe: impl Into<String>, instances: u64, evidence: Evidence) -> Self {
        Self {
            status,
            universe: universe.into(),
            instances,
            evidence,
            exhaustive: false,
            cross_check: None,
            notes: Vec::new(),
        }
    }
}
