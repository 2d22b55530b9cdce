//! Simulations of measurement, preparation, communication and the
//! thermodynamic processes on the global-state model.

mod cascade;
mod communication;
mod dpi;
mod measurement;
mod preparation;
mod zeroth;

pub use cascade::{simulate_cascade, simulate_cascade_with, CascadeConfig};
pub use communication::{simulate_classical_communication, CommunicationLabels};
pub use dpi::simulate_dpi_chain;
pub use measurement::{add_observer, simulate_measurement, MeasurementSpec};
pub use preparation::{simulate_preparation, PreparationLabels};
pub use zeroth::{check_zeroth_law, zeroth_law_from_parts};
