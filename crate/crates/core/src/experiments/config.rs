use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interference::DEFAULT_THRESHOLD;
use crate::spinlab::{Orientation, TrineSet};
use crate::toolate::{ParticleLayout, PortBinding};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    EprStandard,
    #[default]
    Toolate,
    Interference,
    Erasure,
    LhvCompare,
    Verify,
}

impl Protocol {
    /// Angles used when the config gives none, in degrees.
    pub fn default_angles_deg(self) -> &'static [f64] {
        match self {
            Protocol::EprStandard | Protocol::LhvCompare => &[0.0, 90.0, 45.0, 135.0],
            _ => &[0.0, 120.0, 240.0],
        }
    }
}

/// Run description. Angles are in radians; `None` selects the protocol's
/// default (the CHSH settings for `epr_standard`/`lhv_compare`, the trine
/// otherwise).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub protocol: Protocol,
    pub angles: Option<Vec<f64>>,
    /// 0 selects exact-only mode.
    pub trials: u64,
    pub master_seed: u64,
    pub port_binding: PortBinding,
    pub output_path: Option<PathBuf>,
    pub threshold: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            protocol: Protocol::default(),
            angles: None,
            trials: 0,
            master_seed: 0,
            port_binding: PortBinding::IDENTITY,
            output_path: None,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

impl ExperimentConfig {
    pub fn new(protocol: Protocol) -> Self {
        Self {
            protocol,
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Angles in radians with defaults filled in.
    pub fn effective_angles(&self) -> Vec<f64> {
        match &self.angles {
            Some(a) => a.clone(),
            None => self
                .protocol
                .default_angles_deg()
                .iter()
                .map(|d| d.to_radians())
                .collect(),
        }
    }

    /// Same config with defaults made explicit, for echoing into outputs.
    pub fn effective(&self) -> Self {
        Self {
            angles: Some(self.effective_angles()),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let angles = self.effective_angles();
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::Config("angles must be finite".into()));
        }
        let needs: &[usize] = match self.protocol {
            Protocol::EprStandard => &[2, 4],
            Protocol::LhvCompare => &[4],
            _ => &[3],
        };
        if !needs.contains(&angles.len()) {
            return Err(Error::Config(format!(
                "protocol {:?} takes {needs:?} angles, got {}",
                self.protocol,
                angles.len()
            )));
        }
        if matches!(self.protocol, Protocol::EprStandard | Protocol::LhvCompare) {
            // A and B settings are separate lists; each side needs distinct angles.
            let half = angles.len() / 2;
            let (side_a, side_b) = (&angles[..half], &angles[half..]);
            for side in [side_a, side_b] {
                if side.len() == 2 && Orientation::new(side[0]) == Orientation::new(side[1]) {
                    return Err(Error::Config("angles on one side must be distinct".into()));
                }
            }
        } else {
            self.trine()?;
        }
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return Err(Error::Config(format!(
                "threshold must be positive, got {}",
                self.threshold
            )));
        }
        Ok(())
    }

    pub fn orientations(&self) -> Vec<Orientation> {
        self.effective_angles().into_iter().map(Orientation::new).collect()
    }

    pub fn trine(&self) -> Result<TrineSet> {
        match self.protocol {
            Protocol::EprStandard | Protocol::LhvCompare => Ok(TrineSet::default()),
            _ => TrineSet::from_radians(&self.effective_angles()),
        }
    }

    pub fn layout(&self) -> Result<ParticleLayout> {
        Ok(ParticleLayout::new(self.trine()?, self.port_binding))
    }
}
