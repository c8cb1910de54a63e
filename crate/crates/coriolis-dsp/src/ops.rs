//! Arithmetic-operation counters for the per-sample complexity audit.
//!
//! Counting convention (declared, since published complexity tables rarely
//! state theirs):
//! - complex * complex: 4 multiplications + 2 additions
//! - complex * real:    2 multiplications
//! - complex + complex: 2 additions
//! - division counts as a multiplication, subtraction as an addition
//! - sqrt and forward trig (sin/cos/arccos) count as 1 multiplication each
//! - arctangent calls are excluded entirely, matching the usual convention
//!   for phase-based estimators
//!
//! Static storage is tallied at 8 bytes per real and 16 per complex state
//! value.

/// Monotone add/multiply counters, incremented by instrumented tracker code.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub additions: u64,
    pub multiplications: u64,
    pub static_storage_bytes: u64,
}

impl OpCounters {
    pub fn new(static_storage_bytes: u64) -> Self {
        OpCounters { additions: 0, multiplications: 0, static_storage_bytes }
    }

    #[inline]
    pub fn add(&mut self, n: u64) {
        self.additions += n;
    }

    #[inline]
    pub fn mul(&mut self, n: u64) {
        self.multiplications += n;
    }

    /// complex * complex
    #[inline]
    pub fn cmul(&mut self) {
        self.multiplications += 4;
        self.additions += 2;
    }

    /// complex * real
    #[inline]
    pub fn cmul_real(&mut self) {
        self.multiplications += 2;
    }

    /// complex + complex
    #[inline]
    pub fn cadd(&mut self) {
        self.additions += 2;
    }

    /// |z| = sqrt(re^2 + im^2): 2 mul, 1 add, sqrt as 1 mul
    #[inline]
    pub fn cabs(&mut self) {
        self.multiplications += 3;
        self.additions += 1;
    }

    /// sqrt, sin, cos or arccos
    #[inline]
    pub fn transcendental(&mut self) {
        self.multiplications += 1;
    }

    pub fn merge(&mut self, other: &OpCounters) {
        self.additions += other.additions;
        self.multiplications += other.multiplications;
        self.static_storage_bytes += other.static_storage_bytes;
    }
}

pub const BYTES_PER_REAL: u64 = 8;
pub const BYTES_PER_COMPLEX: u64 = 16;
