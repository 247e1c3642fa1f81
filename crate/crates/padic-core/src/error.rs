use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("p = 2 is not supported for unit characters")]
    EvenPrime,
    #[error("residue {0} is not coprime to p = {1}")]
    NotUnit(i128, u64),
    #[error("character index {index} out of range for level {level}")]
    BadCharacter { level: u32, index: u64 },
    #[error("level {0} too large for a residue table")]
    LevelTooLarge(u32),
}
