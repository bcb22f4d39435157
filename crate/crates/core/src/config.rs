//! placeholder
pub struct SimulationConfig;
