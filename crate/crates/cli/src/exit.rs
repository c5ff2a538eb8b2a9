//! Process exit codes. When several conditions hold the highest code wins.

/// Clean run, no trigger holds.
pub const OK: u8 = 0;
/// At least one trigger holds; builds can gate on pending actions.
pub const SATISFIED: u8 = 1;
/// Some TrigIt method is incorrectly encoded.
pub const ENCODING: u8 = 2;
/// Parse or build-config errors in strict mode.
pub const STRICT: u8 = 3;
/// IO or usage errors.
pub const USAGE: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    Satisfied,
    Encoding,
    Strict,
    Usage,
}

impl Condition {
    #[cfg(test)]
    pub const ALL: [Condition; 4] = [
        Condition::Satisfied,
        Condition::Encoding,
        Condition::Strict,
        Condition::Usage,
    ];

    pub fn code(self) -> u8 {
        match self {
            Condition::Satisfied => SATISFIED,
            Condition::Encoding => ENCODING,
            Condition::Strict => STRICT,
            Condition::Usage => USAGE,
        }
    }
}

pub fn code_for(conditions: &[Condition]) -> u8 {
    conditions.iter().map(|c| c.code()).max().unwrap_or(OK)
}
