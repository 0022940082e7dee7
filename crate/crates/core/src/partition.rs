//! Offloading-decision mathematics: energy-benefit formulas, the interval
//! utility recurrence, and the break-even timeout policy.

use serde::{Deserialize, Serialize};

use crate::error::PartitionError;

/// Inputs to the energy-benefit formulas.
///
/// `server_mips` and `speedup` are alternative ways to describe the server;
/// at least one must be present, and when both are they must agree via
/// `server_mips = speedup * mobile_mips`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionInputs {
    /// Computation need, million instructions.
    pub compute_mi: f64,
    /// Mobile processor speed, MIPS.
    pub mobile_mips: f64,
    /// Server processor speed, MIPS.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub server_mips: Option<f64>,
    /// Server speedup factor relative to the mobile processor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speedup: Option<f64>,
    /// Data to ship, megabits.
    pub transfer_mbit: f64,
    /// Link bandwidth, megabits per second.
    pub bandwidth_mbps: f64,
    /// Mobile power while computing, watts.
    pub p_compute_w: f64,
    /// Mobile power while idle, watts.
    pub p_idle_w: f64,
    /// Mobile power while transmitting, watts.
    pub p_transmit_w: f64,
}

impl DecisionInputs {
    pub fn validate(&self) -> Result<(), PartitionError> {
        let bad = |msg: String| Err(PartitionError::BadInput(msg));
        for (name, v) in [
            ("compute_mi", self.compute_mi),
            ("mobile_mips", self.mobile_mips),
            ("transfer_mbit", self.transfer_mbit),
            ("bandwidth_mbps", self.bandwidth_mbps),
            ("p_compute_w", self.p_compute_w),
            ("p_idle_w", self.p_idle_w),
            ("p_transmit_w", self.p_transmit_w),
        ] {
            if !v.is_finite() || v < 0.0 {
                return bad(format!("{name} must be finite and >= 0, got {v}"));
            }
        }
        if self.mobile_mips == 0.0 {
            return bad("mobile_mips must be positive".into());
        }
        if self.bandwidth_mbps == 0.0 {
            return bad("bandwidth_mbps must be positive".into());
        }
        match (self.server_mips, self.speedup) {
            (None, None) => {
                return bad("one of server_mips or speedup is required".into());
            }
            (s, f) => {
                if let Some(s) = s {
                    if !s.is_finite() || s <= 0.0 {
                        return bad(format!("server_mips must be positive, got {s}"));
                    }
                }
                if let Some(f) = f {
                    if !f.is_finite() || f <= 0.0 {
                        return bad(format!("speedup must be positive, got {f}"));
                    }
                }
                if let (Some(s), Some(f)) = (s, f) {
                    let implied = f * self.mobile_mips;
                    if (s - implied).abs() > 1e-9 * implied.abs().max(1.0) {
                        return bad(format!(
                            "server_mips {s} disagrees with speedup*mobile_mips {implied}"
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Server speed in MIPS, from whichever form was supplied.
    pub fn effective_server_mips(&self) -> Option<f64> {
        self.server_mips
            .or(self.speedup.map(|f| f * self.mobile_mips))
    }

    /// Speedup factor, from whichever form was supplied.
    pub fn effective_speedup(&self) -> Option<f64> {
        self.speedup
            .or(self.server_mips.map(|s| s / self.mobile_mips))
    }
}

/// Mobile energy saved by offloading, in joules; negative means offloading
/// costs more than it saves.
///
/// Computes `P_c*C/M - P_i*C/S - P_tr*D/B`: energy the device would have
/// burned computing locally, minus what it burns idling while the server
/// computes, minus what it burns shipping the data.
pub fn energy_saved(inputs: &DecisionInputs) -> Result<f64, PartitionError> {
    inputs.validate()?;
    let s = inputs.effective_server_mips().expect("validated");
    Ok(inputs.p_compute_w * inputs.compute_mi / inputs.mobile_mips
        - inputs.p_idle_w * inputs.compute_mi / s
        - inputs.p_transmit_w * inputs.transfer_mbit / inputs.bandwidth_mbps)
}

/// Same benefit expressed through the speedup factor F (server F times
/// faster): `(C/M)*(P_c - P_i/F) - P_tr*D/B`. Algebraically identical to
/// [`energy_saved`] when `S = F*M`.
pub fn energy_saved_speedup(inputs: &DecisionInputs) -> Result<f64, PartitionError> {
    inputs.validate()?;
    let f = inputs.effective_speedup().expect("validated");
    Ok(
        inputs.compute_mi / inputs.mobile_mips * (inputs.p_compute_w - inputs.p_idle_w / f)
            - inputs.p_transmit_w * inputs.transfer_mbit / inputs.bandwidth_mbps,
    )
}

/// Per-method costs used by the interval-partition math, all in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodCost {
    /// Execution time on the device.
    pub mobile_s: f64,
    /// Execution time on the cloud.
    pub cloud_s: f64,
    /// Cost to upload/invoke this method remotely.
    pub upload_s: f64,
    /// Cost to return this method's result.
    pub return_s: f64,
}

impl MethodCost {
    pub fn new(mobile_s: f64, cloud_s: f64, upload_s: f64, return_s: f64) -> Self {
        Self {
            mobile_s,
            cloud_s,
            upload_s,
            return_s,
        }
    }
}

fn check_sequence(seq: &[MethodCost]) -> Result<(), PartitionError> {
    if seq.is_empty() {
        return Err(PartitionError::BadInput("method sequence is empty".into()));
    }
    for (i, c) in seq.iter().enumerate() {
        for (name, v) in [
            ("mobile_s", c.mobile_s),
            ("cloud_s", c.cloud_s),
            ("upload_s", c.upload_s),
            ("return_s", c.return_s),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(PartitionError::BadInput(format!(
                    "method {} {name} must be finite and >= 0, got {v}",
                    i + 1
                )));
            }
        }
    }
    Ok(())
}

/// Saving from offloading methods `s..=e` (1-based) as one block: the
/// mobile-vs-cloud time difference minus the upload cost at the block start
/// and the return cost at its end.
fn interval_saving(seq: &[MethodCost], s: usize, e: usize) -> f64 {
    let diff: f64 = seq[s - 1..e].iter().map(|c| c.mobile_s - c.cloud_s).sum();
    diff - seq[s - 1].upload_s - seq[e - 1].return_s
}

/// Evaluates the utility recurrence over the sequence:
///
/// `U_1 = max over k in [1, K] of interval_saving(1, k)`, and for i > 1,
/// `U_i = U_{i-1} - (M_{i-1} - C_{i-1} - I_{i-1}) - I_i`.
///
/// Returns `(U_1..U_K, k*)` where `k*` is the 1-based end index achieving
/// U_1; ties go to the largest k. The recurrence telescopes so that U_i
/// equals the saving of the interval `[i, k*]`, which matches the best
/// interval starting at i only while `k* >= i`; prefer
/// [`best_offload_interval`] when choosing what to offload.
pub fn fu_utilities(seq: &[MethodCost]) -> Result<(Vec<f64>, usize), PartitionError> {
    check_sequence(seq)?;
    let k_count = seq.len();

    let mut best = f64::NEG_INFINITY;
    let mut kstar = 1;
    for k in 1..=k_count {
        let saving = interval_saving(seq, 1, k);
        if saving >= best {
            best = saving;
            kstar = k;
        }
    }

    let mut utilities = vec![best];
    for i in 2..=k_count {
        let prev = seq[i - 2];
        let u =
            utilities[i - 2] - (prev.mobile_s - prev.cloud_s - prev.upload_s) - seq[i - 1].upload_s;
        utilities.push(u);
    }
    Ok((utilities, kstar))
}

/// The interval recommendation returned by [`best_offload_interval`];
/// indices are 1-based and inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OffloadChoice {
    pub start: usize,
    pub end: usize,
    pub saving_s: f64,
}

impl OffloadChoice {
    /// Whether offloading the interval actually helps.
    pub fn offload(&self) -> bool {
        self.saving_s > 0.0
    }
}

/// Exhaustively enumerates every contiguous interval and returns the one
/// with the largest saving. Ties resolve to the shortest interval, then the
/// smallest start index. A non-positive saving means "do not offload".
pub fn best_offload_interval(seq: &[MethodCost]) -> Result<OffloadChoice, PartitionError> {
    check_sequence(seq)?;
    let mut best: Option<OffloadChoice> = None;
    for s in 1..=seq.len() {
        for e in s..=seq.len() {
            let saving = interval_saving(seq, s, e);
            let better = match &best {
                None => true,
                Some(b) => {
                    saving > b.saving_s
                        || (saving == b.saving_s
                            && (e - s < b.end - b.start
                                || (e - s == b.end - b.start && s < b.start)))
                }
            };
            if better {
                best = Some(OffloadChoice {
                    start: s,
                    end: e,
                    saving_s: saving,
                });
            }
        }
    }
    Ok(best.expect("non-empty sequence"))
}

/// Outcome of the break-even timeout policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "decision", rename_all = "kebab-case")]
pub enum BreakEvenDecision {
    /// Still under the threshold; keep running locally.
    ContinueLocal,
    /// The timer fired: abandon local progress, ship the task, and restart it
    /// remotely. Projected wall-clock total for the task.
    OffloadAndRestart { projected_total_s: f64 },
}

/// Timeout policy: run locally until `break_even_s` elapses, then give up and
/// offload, restarting the task from scratch on the cloud. The projected
/// total under offload is the threshold plus the remote path time.
pub fn break_even_decision(
    local_elapsed_s: f64,
    break_even_s: f64,
    offload_path_s: f64,
) -> Result<BreakEvenDecision, PartitionError> {
    if !break_even_s.is_finite() || break_even_s <= 0.0 {
        return Err(PartitionError::BadInput(format!(
            "break_even_s must be finite and positive, got {break_even_s}"
        )));
    }
    if !local_elapsed_s.is_finite() || local_elapsed_s < 0.0 {
        return Err(PartitionError::BadInput(format!(
            "local_elapsed_s must be finite and >= 0, got {local_elapsed_s}"
        )));
    }
    if !offload_path_s.is_finite() || offload_path_s < 0.0 {
        return Err(PartitionError::BadInput(format!(
            "offload_path_s must be finite and >= 0, got {offload_path_s}"
        )));
    }
    if local_elapsed_s < break_even_s {
        Ok(BreakEvenDecision::ContinueLocal)
    } else {
        Ok(BreakEvenDecision::OffloadAndRestart {
            projected_total_s: break_even_s + offload_path_s,
        })
    }
}
