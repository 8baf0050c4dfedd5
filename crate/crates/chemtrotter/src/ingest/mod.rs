//! Getting Hamiltonians in and out: FCIDUMP files, random ensembles and the
//! canonical JSON document.

pub mod ensemble;
pub mod fcidump;
pub mod serialize;

pub use ensemble::{generate_ensemble, EnsembleError, EnsembleSpec};
pub use fcidump::{parse_fcidump, to_spin_orbital, FcidumpError, FcidumpFile};
pub use serialize::{deserialize, serialize, SerializeError, FORMAT_VERSION};
