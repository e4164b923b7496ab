//! Glue between a loaded dataset and the yearly networks the commands need.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::config::RunConfig;
use crate::inclusiveness::{self, InclusivenessError, InclusivenessScore, SlopegraphRow};
use crate::ingest::{load_dataset, CohortFilter, Dataset, IngestError, MobilityRecord};
use crate::network::{build_universe, ConnectionSplit, GeoTable, Network, NetworkError, Universe, UniversePolicy};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Inclusiveness(#[from] InclusivenessError),
    #[error("no data for year {0}")]
    MissingYear(i32),
}

/// Records of the analysis years with the special-needs universe, the
/// all-participants universe and the optional geo table.
#[derive(Debug, Clone)]
pub struct Study {
    pub dataset: Dataset,
    pub universe: Universe,
    pub full_universe: Universe,
    pub geo: Option<GeoTable>,
    pub split: ConnectionSplit,
}

impl Study {
    /// Universes are built from study-mobility records of every loaded year.
    pub fn new(
        dataset: Dataset,
        policy: UniversePolicy,
        geo: Option<GeoTable>,
        split: ConnectionSplit,
    ) -> Result<Self, PipelineError> {
        let study = CohortFilter::default();
        let records = || dataset.records.iter().filter(|r| study.matches(r));
        let universe = build_universe(records(), policy)?;
        let full_universe = build_universe(records(), UniversePolicy::AllParticipants)?;
        Ok(Self {
            dataset,
            universe,
            full_universe,
            geo,
            split,
        })
    }

    pub fn load(config: &RunConfig) -> Result<Self, PipelineError> {
        let dataset = load_dataset(&config.data_dir, &config.schema_dir, &config.years.range())?;
        let geo = config.geo_table.as_deref().map(GeoTable::load).transpose()?;
        Self::new(dataset, config.universe_policy, geo, config.connection_split)
    }

    fn records(&self, filter: CohortFilter) -> Vec<&MobilityRecord> {
        self.dataset.records.iter().filter(|r| filter.matches(r)).collect()
    }

    fn check_year(&self, year: i32) -> Result<(), PipelineError> {
        if self.dataset.years.contains(&year) {
            Ok(())
        } else {
            Err(PipelineError::MissingYear(year))
        }
    }

    /// Special-needs study flows of `year`.
    pub fn sn_network(&self, year: i32) -> Result<Network, PipelineError> {
        self.check_year(year)?;
        let recs = self.records(CohortFilter::special_needs().with_year(year));
        Ok(Network::build(
            year,
            recs,
            &self.universe,
            self.geo.as_ref(),
            self.split,
        )?)
    }

    /// All study flows of `year`, over the all-participants universe.
    pub fn full_network(&self, year: i32) -> Result<Network, PipelineError> {
        self.check_year(year)?;
        let recs = self.records(CohortFilter::default().with_year(year));
        Ok(Network::build(
            year,
            recs,
            &self.full_universe,
            self.geo.as_ref(),
            self.split,
        )?)
    }

    /// Yearly scores of persistent receivers over `early ∪ late` and their
    /// slopegraph rows.
    pub fn inclusiveness(
        &self,
        early: &[i32],
        late: &[i32],
    ) -> Result<(Vec<InclusivenessScore>, Vec<SlopegraphRow>), PipelineError> {
        let mut window: Vec<i32> = early.iter().chain(late).copied().collect();
        window.sort_unstable();
        window.dedup();
        let sn: BTreeMap<i32, Network> = window
            .iter()
            .map(|&y| self.sn_network(y).map(|n| (y, n)))
            .collect::<Result<_, _>>()?;
        let persistent = inclusiveness::persistent_receivers(&sn, &window)?;
        let mut scores = Vec::new();
        for (&year, sn_net) in &sn {
            let full = self.full_network(year)?;
            for inst in &persistent {
                scores.push(inclusiveness::compute_index(inst, sn_net, &full)?);
            }
        }
        let rows = inclusiveness::slopegraph_table(&persistent, &scores, early, late)?;
        Ok((scores, rows))
    }
}
