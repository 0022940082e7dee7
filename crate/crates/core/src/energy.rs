//! Energy accounting on both sides of the link: device joules split into
//! compute/idle/transmit (with resend itemized), and host kWh from a linear
//! utilization power model integrated over the run.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::engine::{BusyInterval, SimReport};
use crate::error::EnergyError;

/// Device power draw per activity, watts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DevicePowerProfile {
    pub p_compute_w: f64,
    pub p_idle_w: f64,
    pub p_transmit_w: f64,
}

impl Default for DevicePowerProfile {
    fn default() -> Self {
        Self {
            p_compute_w: 0.9,
            p_idle_w: 0.3,
            p_transmit_w: 1.3,
        }
    }
}

impl DevicePowerProfile {
    pub(crate) fn validate(&self) -> Result<(), EnergyError> {
        for (name, v) in [
            ("p_compute_w", self.p_compute_w),
            ("p_idle_w", self.p_idle_w),
            ("p_transmit_w", self.p_transmit_w),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(EnergyError::BadInput(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Device-side energy for one run, joules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MobileEnergyReport {
    pub compute_j: f64,
    pub idle_j: f64,
    pub transmit_j: f64,
    /// Portion of `transmit_j` caused by crash resend; already included in
    /// the transmit figure, never double-counted in the total.
    pub resend_j: f64,
    pub total_j: f64,
    pub warnings: Vec<String>,
}

/// Bills the device for a simulated run: compute while its own chains run,
/// transmit for every transfer second (resend included), idle for whatever
/// remains of the makespan.
pub fn mobile_energy(
    sim: &SimReport,
    profile: &DevicePowerProfile,
) -> Result<MobileEnergyReport, EnergyError> {
    profile.validate()?;
    let mut warnings = Vec::new();
    if profile.p_idle_w > profile.p_compute_w {
        warnings.push(format!(
            "idle power {} W exceeds compute power {} W",
            profile.p_idle_w, profile.p_compute_w
        ));
    }

    let compute_j = profile.p_compute_w * sim.device_busy_s;
    let transmit_j = profile.p_transmit_w * sim.transfer_time_s;
    let resend_j = profile.p_transmit_w * sim.resend_time_s;
    let idle_s = sim.makespan_s - sim.device_busy_s - sim.transfer_time_s;
    if idle_s < 0.0 {
        // Overlapped transfers (or crash redo) can exceed the wall clock;
        // the device is never billed negative idle time for it.
        warnings
            .push("busy and transfer time exceed the makespan; idle clamped to zero".to_string());
    }
    let idle_j = profile.p_idle_w * idle_s.max(0.0);

    Ok(MobileEnergyReport {
        compute_j,
        idle_j,
        transmit_j,
        resend_j,
        total_j: compute_j + idle_j + transmit_j,
        warnings,
    })
}

/// A physical host: capacity shared by its resident VMs and a linear power
/// curve from `p_static_w` at idle to `p_max_w` at full utilization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HostSpec {
    pub id: String,
    #[serde(default = "default_capacity")]
    pub capacity_mips: f64,
    #[serde(default = "default_p_static")]
    pub p_static_w: f64,
    #[serde(default = "default_p_max")]
    pub p_max_w: f64,
    /// Resident VM ids.
    pub vms: Vec<String>,
}

fn default_capacity() -> f64 {
    20_000.0
}
fn default_p_static() -> f64 {
    100.0
}
fn default_p_max() -> f64 {
    250.0
}

impl HostSpec {
    pub fn standard(id: impl Into<String>, vms: Vec<String>) -> Self {
        Self {
            id: id.into(),
            capacity_mips: default_capacity(),
            p_static_w: default_p_static(),
            p_max_w: default_p_max(),
            vms,
        }
    }

    pub(crate) fn validate(&self) -> Result<(), EnergyError> {
        if self.id.is_empty() {
            return Err(EnergyError::BadInput("host id must not be empty".into()));
        }
        if !self.capacity_mips.is_finite() || self.capacity_mips <= 0.0 {
            return Err(EnergyError::BadInput(format!(
                "host '{}' capacity_mips must be positive, got {}",
                self.id, self.capacity_mips
            )));
        }
        if !(self.p_static_w.is_finite() && self.p_max_w.is_finite())
            || self.p_static_w < 0.0
            || self.p_max_w < self.p_static_w
        {
            return Err(EnergyError::BadInput(format!(
                "host '{}' needs 0 <= p_static_w <= p_max_w, got {} and {}",
                self.id, self.p_static_w, self.p_max_w
            )));
        }
        Ok(())
    }
}

/// Host-side energy over a run, kWh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudEnergyReport {
    pub horizon_s: f64,
    pub per_host_kwh: BTreeMap<String, f64>,
    pub total_kwh: f64,
    pub warnings: Vec<String>,
}

const JOULES_PER_KWH: f64 = 3.6e6;

/// Integrates each host's power over `[0, horizon]` given the VM busy
/// intervals: power(t) = p_static + (p_max - p_static) * u(t), where u(t) is
/// the resident busy MIPS over host capacity, capped at 1. Demand beyond
/// capacity is reported as an overload warning rather than stretched time.
pub fn integrate_host_energy(
    busy: &[BusyInterval],
    hosts: &[HostSpec],
    horizon_s: f64,
) -> Result<CloudEnergyReport, EnergyError> {
    let mut placed: BTreeMap<&str, &str> = BTreeMap::new();
    let mut host_ids = BTreeSet::new();
    for host in hosts {
        host.validate()?;
        if !host_ids.insert(host.id.as_str()) {
            return Err(EnergyError::BadInput(format!(
                "duplicate host id '{}'",
                host.id
            )));
        }
        for vm in &host.vms {
            if placed.insert(vm.as_str(), host.id.as_str()).is_some() {
                return Err(EnergyError::MultiplyHostedVm(vm.clone()));
            }
        }
    }
    for interval in busy {
        if !placed.contains_key(interval.vm_id.as_str()) {
            return Err(EnergyError::UnhostedVm(interval.vm_id.clone()));
        }
    }
    if !horizon_s.is_finite() || horizon_s < 0.0 {
        return Err(EnergyError::BadInput(format!(
            "horizon must be finite and >= 0, got {horizon_s}"
        )));
    }
    // Never truncate recorded work: extend the horizon to cover it.
    let horizon_s = busy
        .iter()
        .fold(horizon_s, |h, interval| h.max(interval.end_s));

    let mut warnings = Vec::new();
    let mut per_host_kwh = BTreeMap::new();
    let mut total_kwh = 0.0;
    for host in hosts {
        let resident: Vec<&BusyInterval> = busy
            .iter()
            .filter(|b| host.vms.contains(&b.vm_id))
            .collect();

        let mut cuts: Vec<f64> = vec![0.0, horizon_s];
        for b in &resident {
            cuts.push(b.start_s.clamp(0.0, horizon_s));
            cuts.push(b.end_s.clamp(0.0, horizon_s));
        }
        cuts.sort_by(|a, b| a.total_cmp(b));
        cuts.dedup();

        let mut joules = 0.0;
        let mut overloaded = false;
        for pair in cuts.windows(2) {
            let (t0, t1) = (pair[0], pair[1]);
            if t1 <= t0 {
                continue;
            }
            // Breakpoints include every interval endpoint, so coverage of
            // the whole segment is an endpoint comparison.
            let demand: f64 = resident
                .iter()
                .filter(|b| b.start_s <= t0 && b.end_s >= t1)
                .map(|b| b.mips)
                .sum();
            let mut u = demand / host.capacity_mips;
            if u > 1.0 {
                overloaded = true;
                u = 1.0;
            }
            joules += (host.p_static_w + (host.p_max_w - host.p_static_w) * u) * (t1 - t0);
        }
        if overloaded {
            warnings.push(format!(
                "host '{}' demand exceeds capacity; utilization capped at 1",
                host.id
            ));
        }
        let kwh = joules / JOULES_PER_KWH;
        per_host_kwh.insert(host.id.clone(), kwh);
        total_kwh += kwh;
    }

    Ok(CloudEnergyReport {
        horizon_s,
        per_host_kwh,
        total_kwh,
        warnings,
    })
}

/// Host energy for a simulated run. Every fleet VM must be placed on exactly
/// one host; the horizon defaults to the run's makespan.
pub fn cloud_energy(
    sim: &SimReport,
    hosts: &[HostSpec],
    horizon_s: Option<f64>,
) -> Result<CloudEnergyReport, EnergyError> {
    let hosted: BTreeSet<&str> = hosts
        .iter()
        .flat_map(|h| h.vms.iter().map(String::as_str))
        .collect();
    for vm in sim.per_vm_bytes.keys() {
        if !hosted.contains(vm.as_str()) {
            return Err(EnergyError::UnhostedVm(vm.clone()));
        }
    }
    integrate_host_energy(&sim.vm_busy, hosts, horizon_s.unwrap_or(sim.makespan_s))
}
