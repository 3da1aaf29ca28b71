//! Library side of the `egz` command-line tool: file formats, instance
//! generators and the benchmark harness.

pub mod bench;
pub mod generate;
pub mod io;

pub use bench::{run_bench, write_csv, BenchMode, BenchRecord};
pub use generate::{generate_egz, generate_prime_target, Distribution};
pub use io::{format_instance, parse_certificate, parse_instance, CertificateJson};
