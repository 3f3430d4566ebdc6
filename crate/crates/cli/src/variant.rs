use std::fmt;

use sprintz::{BitWidth, CodecConfig, ForecasterKind};

/// A named codec configuration compared by the benchmarks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Delta,
    Fire,
    FireHuf,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Delta, Variant::Fire, Variant::FireHuf];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Delta => "SprintzDelta",
            Variant::Fire => "SprintzFIRE",
            Variant::FireHuf => "SprintzFIRE+Huf",
        }
    }

    pub fn config(self, width: BitWidth, ncols: usize) -> CodecConfig {
        let base = CodecConfig::new(width, ncols);
        match self {
            Variant::Delta => base,
            Variant::Fire => base.with_forecaster(ForecasterKind::Fire),
            Variant::FireHuf => base.with_forecaster(ForecasterKind::Fire).with_entropy(true),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
