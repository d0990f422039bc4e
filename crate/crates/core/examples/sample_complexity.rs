// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Copies of the input state needed to decide the phase, QCNN against a
//! single string order parameter.
//!
//!     cargo run --release --example sample_complexity

use qcnn::bench::{compare_complexity, format_m_min, sample_complexity, SampleComplexityQuery};
use qcnn::train::Line;

fn main() -> qcnn::Result<()> {
    for p in [1.0, 0.9, 0.6, 0.51] {
        println!("p = {p}: M_min = {}", format_m_min(sample_complexity(&SampleComplexityQuery::new(p))?));
    }
    let line = Line { h1: (0.0, 1.4), h2: (0.0, 0.0) };
    let rows = compare_complexity(15, 1, &line, 8, &[7], 0)?;
    println!("  h1    QCNN M_min   SOP M_min   ratio");
    for r in rows {
        println!("{:5.2}  {:>10}  {:>10}  {:.2}", r.h1, format_m_min(r.qcnn_m_min.round()), format_m_min(r.sops[0].m_min.round()), r.ratio);
    }
    Ok(())
}
