pub mod channel;
pub mod harness;
pub mod ia;
pub mod metrics;
pub mod numerics;
