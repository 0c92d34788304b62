use std::fmt;

/// A node's vote. `Undecided` only arises in Cellular Consensus after a tied
/// neighborhood vote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Opinion {
    Zero,
    One,
    Undecided,
}

impl Opinion {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Opinion::One
        } else {
            Opinion::Zero
        }
    }

    pub fn is_binary(self) -> bool {
        self != Opinion::Undecided
    }

    /// The opposite binary opinion. `Undecided` has no opposite and maps to itself.
    pub fn flipped(self) -> Self {
        match self {
            Opinion::Zero => Opinion::One,
            Opinion::One => Opinion::Zero,
            Opinion::Undecided => Opinion::Undecided,
        }
    }

    /// 0.0 or 1.0; `None` for `Undecided`.
    pub fn as_f64(self) -> Option<f64> {
        match self {
            Opinion::Zero => Some(0.0),
            Opinion::One => Some(1.0),
            Opinion::Undecided => None,
        }
    }
}

impl fmt::Display for Opinion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Opinion::Zero => f.write_str("0"),
            Opinion::One => f.write_str("1"),
            Opinion::Undecided => f.write_str("-1"),
        }
    }
}
