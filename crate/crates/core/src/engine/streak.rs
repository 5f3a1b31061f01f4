use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    X,
    Y,
}

/// Direction of an assessment relative to the prior position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Down,
    Up,
}

impl Direction {
    /// `None` when the assessment equals the prior value exactly.
    pub fn of_change(prev: f64, new: f64) -> Option<Self> {
        if new > prev {
            Some(Direction::Up)
        } else if new < prev {
            Some(Direction::Down)
        } else {
            None
        }
    }
}

/// Consecutive same-direction sessions on one axis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisStreak {
    pub k: u32,
    pub last_sign: Option<Direction>,
}

impl AxisStreak {
    /// Folds one session's direction into the streak.
    ///
    /// A zero change leaves the streak untouched. A change matching the last
    /// recorded direction (or the first direction ever seen) extends it; an
    /// opposite change resets `k` to 0 and reports a reversal.
    pub fn advance(self, prev: f64, new: f64) -> (AxisStreak, bool) {
        let Some(sign) = Direction::of_change(prev, new) else {
            return (self, false);
        };
        match self.last_sign {
            Some(last) if last != sign => (
                AxisStreak {
                    k: 0,
                    last_sign: Some(sign),
                },
                true,
            ),
            _ => (
                AxisStreak {
                    k: self.k.saturating_add(1),
                    last_sign: Some(sign),
                },
                false,
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreakState {
    pub x: AxisStreak,
    pub y: AxisStreak,
}

impl StreakState {
    pub fn axis(&self, axis: Axis) -> AxisStreak {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
        }
    }

    /// Advances the streak on `axis`, returning the new state and whether the
    /// session reversed direction.
    pub fn update(self, axis: Axis, prev: f64, new: f64) -> (StreakState, bool) {
        let (next, reversal) = self.axis(axis).advance(prev, new);
        let state = match axis {
            Axis::X => StreakState { x: next, ..self },
            Axis::Y => StreakState { y: next, ..self },
        };
        (state, reversal)
    }
}
