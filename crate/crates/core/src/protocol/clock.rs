use serde::{Deserialize, Serialize};

/// Round-based negotiation time. `t = round / deadline`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VirtualClock {
    round: u32,
    deadline: u32,
}

impl VirtualClock {
    pub const DEFAULT_DEADLINE: u32 = 1000;

    pub fn new(deadline: u32) -> Self {
        VirtualClock { round: 0, deadline }
    }

    /// Clock positioned at `round` (clamped to the deadline).
    pub fn at(round: u32, deadline: u32) -> Self {
        VirtualClock {
            round: round.min(deadline),
            deadline,
        }
    }

    /// Clock positioned at normalized time `t`, rounded down to a round.
    pub fn at_time(t: f64, deadline: u32) -> Self {
        let round = (t.clamp(0.0, 1.0) * deadline as f64).floor() as u32;
        Self::at(round, deadline)
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn deadline(&self) -> u32 {
        self.deadline
    }

    pub fn t(&self) -> f64 {
        if self.deadline == 0 {
            1.0
        } else {
            self.round as f64 / self.deadline as f64
        }
    }

    pub fn expired(&self) -> bool {
        self.round >= self.deadline
    }

    pub fn advance(&mut self) {
        if self.round < self.deadline {
            self.round += 1;
        }
    }
}

impl Default for VirtualClock {
    fn default() -> Self {
        VirtualClock::new(Self::DEFAULT_DEADLINE)
    }
}
