use core::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Advantaged,
    Disadvantaged,
}

impl Group {
    pub fn as_str(self) -> &'static str {
        match self {
            Group::Advantaged => "advantaged",
            Group::Disadvantaged => "disadvantaged",
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            Group::Advantaged => "adv",
            Group::Disadvantaged => "dis",
        }
    }

    pub fn parse(label: &str) -> Result<Self> {
        match label {
            "advantaged" | "adv" => Ok(Group::Advantaged),
            "disadvantaged" | "dis" => Ok(Group::Disadvantaged),
            other => Err(Error::UnknownGroup(other.into())),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Group ratios used to label riders and drivers, and the base acceptance
/// probabilities per (driver, rider) group pair before `κ` scaling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemographicParams {
    /// Rider ratio disadvantaged : advantaged.
    pub rider_ratio: (f64, f64),
    /// Driver ratio disadvantaged : advantaged.
    pub driver_ratio: (f64, f64),
    pub p_adv_adv: f64,
    pub p_dis_dis: f64,
    pub p_other: f64,
    pub kappa: f64,
}

impl Default for DemographicParams {
    fn default() -> Self {
        Self {
            rider_ratio: (1.0, 2.0),
            driver_ratio: (3.0, 1.0),
            p_adv_adv: 0.6,
            p_dis_dis: 0.3,
            p_other: 0.1,
            kappa: 0.5,
        }
    }
}

impl DemographicParams {
    pub fn validate(&self) -> Result<()> {
        for (name, (a, b)) in [
            ("rider_ratio", self.rider_ratio),
            ("driver_ratio", self.driver_ratio),
        ] {
            if !(a > 0.0 && b > 0.0) {
                return Err(Error::param(
                    name,
                    "both parts of the ratio must be positive",
                ));
            }
        }
        for (name, p) in [
            ("p_adv_adv", self.p_adv_adv),
            ("p_dis_dis", self.p_dis_dis),
            ("p_other", self.p_other),
        ] {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::param(name, "base probability must lie in (0, 1]"));
            }
        }
        if !(0.0..=1.0).contains(&self.kappa) {
            return Err(Error::param("kappa", "must lie in [0, 1]"));
        }
        Ok(())
    }

    pub fn rider_disadvantaged_share(&self) -> f64 {
        self.rider_ratio.0 / (self.rider_ratio.0 + self.rider_ratio.1)
    }

    pub fn driver_disadvantaged_share(&self) -> f64 {
        self.driver_ratio.0 / (self.driver_ratio.0 + self.driver_ratio.1)
    }

    /// Base probability for the pair, scaled as `κ + (1 - κ)·p`.
    pub fn accept_prob(&self, driver: Group, rider: Group) -> f64 {
        let base = match (driver, rider) {
            (Group::Advantaged, Group::Advantaged) => self.p_adv_adv,
            (Group::Disadvantaged, Group::Disadvantaged) => self.p_dis_dis,
            _ => self.p_other,
        };
        self.kappa + (1.0 - self.kappa) * base
    }
}

/// [`DemographicParams::accept_prob`] on textual group labels.
pub fn assign_accept_prob(
    driver_group: &str,
    rider_group: &str,
    demo: &DemographicParams,
) -> Result<f64> {
    Ok(demo.accept_prob(Group::parse(driver_group)?, Group::parse(rider_group)?))
}
