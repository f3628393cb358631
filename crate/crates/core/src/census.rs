//! Batch runs of the integrality/stability comparison, one record per
//! (ring, connection set).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::functional::{certify, Certificate};
use crate::spec::RingSpec;
use crate::spectra::{scalar_orbits, spectrum, spectrum_by_characters, symmetric_sets, CayleyGraph, VerifyMode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub ring: String,
    #[serde(rename = "S")]
    pub connection: Vec<usize>,
    pub stable: bool,
    pub integral: bool,
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub rings: usize,
    pub non_symmetric_rings: usize,
    pub records: usize,
    pub stable_integral: usize,
    pub stable_nonintegral: usize,
    pub unstable_integral: usize,
    pub unstable_nonintegral: usize,
    /// Records breaking `stable ⟹ integral`, or `integral ⟹ stable` on a symmetric ring.
    pub violations: usize,
}

impl CensusSummary {
    pub fn is_consistent(&self) -> bool {
        self.violations == 0
    }
}

/// Run the census over `family`, calling `sink` for every record in a
/// deterministic order. Symmetric rings use their certified functional;
/// other rings fall back to the full character family.
pub fn run_census(
    family: &[RingSpec],
    mode: &VerifyMode,
    timestamp: Option<u64>,
    mut sink: impl FnMut(&CensusRecord) -> std::io::Result<()>,
) -> Result<std::io::Result<CensusSummary>> {
    let mut summary = CensusSummary::default();
    for spec in family {
        let ring = spec.build()?;
        let cert = certify(&ring, Some(spec))?;
        let symmetric = cert.is_symmetric();
        summary.rings += 1;
        if !symmetric {
            summary.non_symmetric_rings += 1;
        }
        let orbits = scalar_orbits(&ring);
        let sets = symmetric_sets(&ring, mode)?;
        let label = ring.label();
        // order-preserving parallel collect; a single writer drains it below
        let records: Vec<CensusRecord> = sets
            .into_par_iter()
            .map(|set| {
                let graph = CayleyGraph::new(&ring, set.iter().copied())?;
                let report = match &cert {
                    Certificate::Symmetric { psi, .. } => spectrum(&ring, &graph, psi)?,
                    Certificate::NotSymmetric { .. } => spectrum_by_characters(&ring, &graph)?,
                };
                Ok(CensusRecord {
                    ring: label.clone(),
                    stable: orbits.is_union_of_orbits(&set),
                    connection: set,
                    integral: report.integral,
                    digest: report.digest(),
                    timestamp,
                })
            })
            .collect::<Result<_>>()?;
        for record in &records {
            summary.records += 1;
            match (record.stable, record.integral) {
                (true, true) => summary.stable_integral += 1,
                (true, false) => summary.stable_nonintegral += 1,
                (false, true) => summary.unstable_integral += 1,
                (false, false) => summary.unstable_nonintegral += 1,
            }
            if (record.stable && !record.integral) || (symmetric && record.integral && !record.stable) {
                summary.violations += 1;
            }
            if let Err(e) = sink(record) {
                return Ok(Err(e));
            }
        }
    }
    Ok(Ok(summary))
}
