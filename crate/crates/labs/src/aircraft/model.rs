use std::fmt;

use contract_forge::ContractError;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Physical constants and nominal values of the fuel/thermal loop.
///
/// Power and heat variables of the contracts are in kW, temperatures in K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PhysicalConstants {
    /// Specific heat of the fuel, J/(kg·K).
    pub c_f: f64,
    /// Specific heat of air, J/(kg·K).
    pub c_a: f64,
    /// Fuel density, kg/m³.
    pub rho_f: f64,
    /// Pump pressure rise, Pa.
    pub dp_ep: f64,
    pub eta_ep: f64,
    /// Fuel-air heat exchanger efficiency.
    pub eta_x: f64,
    /// Engine heat per unit of burned fuel, J/kg.
    pub k_e: f64,
    /// Generator efficiency.
    pub eta_g: f64,
    /// Electric load efficiency.
    pub eta_l: f64,
    /// Scale of the splitter's temperature band, K.
    pub t_ref: f64,
    /// Nominal tank temperature, K.
    pub t_in_nominal: f64,
    /// Nominal electric power demand, kW.
    pub w_nom_nominal: f64,
    /// Allowed deviation of the returned fuel from the tank temperature, K.
    pub delta_t: f64,
    /// Allowed engine inlet temperatures, K.
    pub t_e_range: (f64, f64),
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            c_f: 2000.0,
            c_a: 1000.0,
            rho_f: 800.0,
            dp_ep: 6.9e6,
            eta_ep: 0.6,
            eta_x: 0.6,
            k_e: 5000.0,
            eta_g: 0.5,
            eta_l: 0.5,
            t_ref: 300.0,
            t_in_nominal: 288.0,
            w_nom_nominal: 140.0,
            delta_t: 10.0,
            t_e_range: (300.0, 330.0),
        }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<(), AircraftError> {
        let positive = [
            ("c_f", self.c_f),
            ("c_a", self.c_a),
            ("rho_f", self.rho_f),
            ("dp_ep", self.dp_ep),
            ("eta_ep", self.eta_ep),
            ("eta_x", self.eta_x),
            ("k_e", self.k_e),
            ("eta_g", self.eta_g),
            ("eta_l", self.eta_l),
            ("t_ref", self.t_ref),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(AircraftError::Config(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    /// Nominal pump power at fuel flow `mdot_in`, kW.
    pub fn pump_power(&self, mdot_in: f64) -> f64 {
        mdot_in * self.dp_ep / (self.rho_f * self.eta_ep) / 1000.0
    }

    /// Nominal temperature rise through the pump, K.
    pub fn pump_heating(&self) -> f64 {
        (1.0 - self.eta_ep) * self.dp_ep / (self.c_f * self.rho_f * self.eta_ep)
    }

    /// Temperature rise per kW absorbed by a fuel flow `mdot`, K/kW.
    pub fn heating_per_kw(&self, mdot: f64) -> f64 {
        1000.0 / (mdot * self.c_f)
    }

    /// Fraction of the hot-cold difference removed by the fixed heat exchanger.
    pub fn hx_gain(&self, op: &OperatingPoint) -> f64 {
        self.eta_x * op.mdot_a * self.c_a / ((op.mdot_in - op.mdot_e()) * self.c_f)
    }
}

/// A flight regime and a design point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    /// Altitude, km.
    pub alt: f64,
    /// Thrust, kg.
    pub thrust: f64,
    /// Fuel flow through the pump, kg/s.
    pub mdot_in: f64,
    /// Air flow through the heat exchanger, kg/s.
    pub mdot_a: f64,
}

impl OperatingPoint {
    /// Fuel burned by the engine, kg/s.
    pub fn mdot_e(&self) -> f64 {
        0.7 * self.thrust / 3600.0
    }

    /// Engine heat, kW.
    pub fn engine_heat(&self, k: &PhysicalConstants) -> f64 {
        k.k_e * self.mdot_e() / 1000.0
    }

    pub fn air_temperature(&self) -> Result<f64, AircraftError> {
        isa_air_temperature(self.alt)
    }

    pub fn validate(&self) -> Result<(), AircraftError> {
        self.air_temperature()?;
        if !(self.mdot_e() > 0.0) {
            return Err(AircraftError::Construction(
                "thrust must be positive".into(),
            ));
        }
        if !(self.mdot_in > self.mdot_e()) {
            return Err(AircraftError::Construction(format!(
                "fuel flow {} kg/s does not exceed engine burn {:.4} kg/s",
                self.mdot_in,
                self.mdot_e()
            )));
        }
        if !(self.mdot_a >= 0.0) {
            return Err(AircraftError::Construction(
                "air flow must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Two-layer standard atmosphere: linear lapse to 11 km, isothermal to 20 km.
pub fn isa_air_temperature(alt: f64) -> Result<f64, AircraftError> {
    if !(0.0..=20.0).contains(&alt) {
        return Err(AircraftError::Range(format!(
            "altitude {alt} km outside [0, 20]"
        )));
    }
    Ok(if alt <= 11.0 {
        288.15 - 6.5 * alt
    } else {
        216.65
    })
}

/// Relative tolerances of the component guarantees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceVector {
    pub eps_ep_w: f64,
    pub eps_ep_t: f64,
    pub eps_g: f64,
    pub eps_l_w: f64,
    pub eps_l_h: f64,
    pub eps_hl: f64,
    pub eps_s: f64,
}

impl ToleranceVector {
    pub const fn uniform(e: f64) -> Self {
        Self {
            eps_ep_w: e,
            eps_ep_t: e,
            eps_g: e,
            eps_l_w: e,
            eps_l_h: e,
            eps_hl: e,
            eps_s: e,
        }
    }

    pub fn to_array(&self) -> [f64; 7] {
        [
            self.eps_ep_w,
            self.eps_ep_t,
            self.eps_g,
            self.eps_l_w,
            self.eps_l_h,
            self.eps_hl,
            self.eps_s,
        ]
    }

    pub fn from_slice(x: &[f64]) -> Self {
        Self {
            eps_ep_w: x[0],
            eps_ep_t: x[1],
            eps_g: x[2],
            eps_l_w: x[3],
            eps_l_h: x[4],
            eps_hl: x[5],
            eps_s: x[6],
        }
    }

    pub fn validate(&self) -> Result<(), AircraftError> {
        if self
            .to_array()
            .iter()
            .any(|e| !(e.is_finite() && *e >= 0.0))
        {
            return Err(AircraftError::Config(
                "tolerances must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HxKind {
    Fixed,
    Controlled,
}

impl fmt::Display for HxKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HxKind::Fixed => "fixed",
            HxKind::Controlled => "controlled",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ComponentKind {
    Pump,
    Generator,
    Load,
    HeatLoad,
    Splitter,
    HxFixed,
    HxControlled,
    Engine,
}

#[derive(Debug, Error)]
pub enum AircraftError {
    #[error(transparent)]
    Contract(#[from] ContractError),
    #[error("range error: {0}")]
    Range(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
