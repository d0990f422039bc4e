// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Searches encoder/decoder unitaries against anisotropic Pauli noise and
//! compares the result with Shor's code and with no encoding.
//!
//!     cargo run --release --example qec_search

use qcnn::qec::{error_rate_curve, optimize, ErrorModel, QecOptConfig};

fn main() -> qcnn::Result<()> {
    let em = ErrorModel::anisotropic(1e-3, 0.4)?;
    let cfg = QecOptConfig { restarts: 2, ..QecOptConfig::default() };
    let (code, report, restarts) = optimize(&em, &cfg)?;
    for r in &restarts {
        println!("restart {}: logical rate {:.4e}", r.restart, r.logical_error_rate);
    }
    println!(
        "best {:.4e}, Shor {:.4e}, identity {:.4e}",
        report.logical_error_rate, report.shor_rate, report.identity_rate
    );
    for p in error_rate_curve(&code, &em, &[1e-3, 1e-2, 5e-2])? {
        println!("total {:.0e}: learned {:.3e}, Shor {:.3e}, identity {:.3e}", p.total_rate, p.learned, p.shor, p.identity);
    }
    Ok(())
}
