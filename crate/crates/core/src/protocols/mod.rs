//! The four port-based teleportation algorithms as Naimark circuits, their
//! figures of merit, and symbolic resource estimates.
//!
//! dPBT runs one algorithm for both resource states, so five protocol tags
//! map onto four circuits.

mod figures;
mod naimark;
mod plan;
mod resources;
mod teleport;

pub use figures::{
    average_fidelity, entanglement_fidelity, optimal_resource, resource_operator,
    success_probability, OptimalResource,
};
pub use naimark::{naimark, naimark_with_spectators, NaimarkCircuit};
pub use plan::{
    plan, slot, tail_triples, AttachKey, FailKey, Plan, PortClass, RotationCounts, Tail,
};
pub use resources::{resource_estimate, ResourceClasses, ResourceEstimate, SchurVariant};
pub use teleport::{
    haar_qubit, haar_state, outcome_distribution, resource_state, sample_outcome, teleport,
    teleport_with_rng, ProtocolRun,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spinalg::Regime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    DpbtMes,
    DpbtOpt,
    /// Algorithm 1: N+1 outcomes, five rounds of amplification.
    PpbtMes,
    /// Algorithm 2: no amplification, succeeds a quarter as often.
    PpbtMesNoAa,
    PpbtOpt,
}

/// Which resource state Alice and Bob share.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Resource {
    /// N singlets.
    Singlets,
    /// (O ⊗ I) applied to N singlets.
    Deformed,
    /// The symmetric resource maximizing the PGM entanglement fidelity.
    Optimal,
}

impl Protocol {
    pub const ALL: [Protocol; 5] = [
        Protocol::DpbtMes,
        Protocol::DpbtOpt,
        Protocol::PpbtMes,
        Protocol::PpbtMesNoAa,
        Protocol::PpbtOpt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::DpbtMes => "dpbt-mes",
            Protocol::DpbtOpt => "dpbt-opt",
            Protocol::PpbtMes => "ppbt-mes",
            Protocol::PpbtMesNoAa => "ppbt-mes-no-aa",
            Protocol::PpbtOpt => "ppbt-opt",
        }
    }

    pub fn regime(self) -> Regime {
        match self {
            Protocol::DpbtMes | Protocol::DpbtOpt => Regime::Dpbt,
            Protocol::PpbtMes | Protocol::PpbtMesNoAa => Regime::PpbtMes,
            Protocol::PpbtOpt => Regime::PpbtOpt,
        }
    }

    pub fn resource(self) -> Resource {
        match self {
            Protocol::DpbtMes | Protocol::PpbtMes | Protocol::PpbtMesNoAa => Resource::Singlets,
            Protocol::DpbtOpt => Resource::Optimal,
            Protocol::PpbtOpt => Resource::Deformed,
        }
    }

    pub fn is_probabilistic(self) -> bool {
        self.regime().is_probabilistic()
    }

    /// Outcomes reported to Bob: ports 1..N, plus failure for pPBT.
    pub fn outcomes(self, n: usize) -> usize {
        self.regime().outcomes(n)
    }
}

impl std::str::FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dpbt-mes" | "dpbt" => Ok(Protocol::DpbtMes),
            "dpbt-opt" => Ok(Protocol::DpbtOpt),
            "ppbt-mes" | "ppbt-mes-alg1" => Ok(Protocol::PpbtMes),
            "ppbt-mes-no-aa" | "ppbt-mes-alg2" => Ok(Protocol::PpbtMesNoAa),
            "ppbt-opt" => Ok(Protocol::PpbtOpt),
            other => Err(Error::Domain(format!("unknown protocol '{other}'"))),
        }
    }
}

impl std::fmt::Display for Protocol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
