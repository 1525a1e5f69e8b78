//! Size limits for enumeration, pairwise verification and explicit builds.
//! Each default can be overridden through an environment variable.

/// Largest code the enumerator will materialize (`CDC_ENUM_LIMIT`).
pub const DEFAULT_ENUM_LIMIT: u64 = 1 << 24;
/// Largest number of pairs exhaustive verification will check (`CDC_PAIR_LIMIT`).
pub const DEFAULT_PAIR_LIMIT: u64 = 1_000_000_000;
/// Largest code an explicit build will produce (`CDC_BUILD_CUTOFF`).
pub const DEFAULT_BUILD_CUTOFF: u64 = 1_000_000;

fn env_or(name: &str, default: u64) -> u64 {
    std::env::var(name).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(default)
}

pub fn enum_limit() -> u64 {
    env_or("CDC_ENUM_LIMIT", DEFAULT_ENUM_LIMIT)
}

pub fn pair_limit() -> u64 {
    env_or("CDC_PAIR_LIMIT", DEFAULT_PAIR_LIMIT)
}

pub fn build_cutoff() -> u64 {
    env_or("CDC_BUILD_CUTOFF", DEFAULT_BUILD_CUTOFF)
}
