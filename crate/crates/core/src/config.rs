use crate::error::{Error, Result};
use crate::forecast::{ForecasterKind, DEFAULT_LEARN_SHIFT, MAX_LEARN_SHIFT};
use crate::word::BitWidth;

/// Blocks whose headers share one padded header region.
pub const DEFAULT_GROUP_SIZE: u8 = 2;

/// Codec parameters. Immutable once a stream is started.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodecConfig {
    pub width: BitWidth,
    pub ncols: usize,
    pub forecaster: ForecasterKind,
    pub entropy: bool,
    pub group_size: u8,
    pub learn_shift: u8,
}

impl CodecConfig {
    pub fn new(width: BitWidth, ncols: usize) -> Self {
        CodecConfig {
            width,
            ncols,
            forecaster: ForecasterKind::Delta,
            entropy: false,
            group_size: DEFAULT_GROUP_SIZE,
            learn_shift: DEFAULT_LEARN_SHIFT,
        }
    }

    pub fn with_forecaster(mut self, kind: ForecasterKind) -> Self {
        self.forecaster = kind;
        self
    }

    pub fn with_entropy(mut self, on: bool) -> Self {
        self.entropy = on;
        self
    }

    pub fn with_group_size(mut self, g: u8) -> Self {
        self.group_size = g;
        self
    }

    pub fn with_learn_shift(mut self, shift: u8) -> Self {
        self.learn_shift = shift;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.ncols == 0 || self.ncols > u16::MAX as usize {
            return Err(Error::InvalidConfig(format!(
                "column count {} outside 1..=65535",
                self.ncols
            )));
        }
        if self.group_size == 0 {
            return Err(Error::InvalidConfig(
                "header group size must be at least 1".into(),
            ));
        }
        if self.learn_shift > MAX_LEARN_SHIFT {
            return Err(Error::InvalidConfig(format!(
                "learn shift {} exceeds {MAX_LEARN_SHIFT}",
                self.learn_shift
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = CodecConfig::new(BitWidth::W8, 3);
        assert_eq!(c.group_size, 2);
        assert_eq!(c.learn_shift, 1);
        assert_eq!(c.forecaster, ForecasterKind::Delta);
        assert!(!c.entropy);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        assert!(CodecConfig::new(BitWidth::W8, 0).validate().is_err());
        assert!(CodecConfig::new(BitWidth::W8, 70_000).validate().is_err());
        assert!(CodecConfig::new(BitWidth::W16, 1)
            .with_group_size(0)
            .validate()
            .is_err());
        assert!(CodecConfig::new(BitWidth::W16, 1)
            .with_learn_shift(25)
            .validate()
            .is_err());
    }
}
