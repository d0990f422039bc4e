// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! Logical rate against total physical rate at fixed ratios.

use serde::{Deserialize, Serialize};

use super::baselines::{identity_baseline, logical_rate, shor_baseline};
use super::code::EncoderDecoder;
use super::error_model::ErrorModel;
use super::optimize::report;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub total_rate: f64,
    pub learned: f64,
    pub shor: f64,
    pub identity: f64,
}

pub fn error_rate_curve(code: &EncoderDecoder, template: &ErrorModel, totals: &[f64]) -> Result<Vec<CurvePoint>> {
    let mut out = Vec::with_capacity(totals.len());
    for &t in totals {
        if t == 0.0 {
            out.push(CurvePoint { total_rate: 0.0, learned: 0.0, shor: 0.0, identity: 0.0 });
            continue;
        }
        let em = template.with_total(t)?;
        let rep = report(code, &em)?;
        out.push(CurvePoint {
            total_rate: t,
            learned: logical_rate(rep.f_q),
            shor: shor_baseline(&em)?,
            identity: identity_baseline(&em),
        });
    }
    Ok(out)
}
