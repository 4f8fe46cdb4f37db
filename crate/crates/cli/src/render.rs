//! Human-readable report rendering (`--format text`).

use std::fmt::Write;

use crate::run::{
    BoundReportJson, CertificateJson, CorollaryReportJson, ImproveReportJson, MaxBReportJson,
    OptimizeCReportJson, VerifyReportJson,
};

fn tuples(list: &[Vec<u32>]) -> String {
    let parts: Vec<String> = list
        .iter()
        .map(|coords| {
            let inner: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
            format!("({})", inner.join(","))
        })
        .collect();
    parts.join(" ")
}

fn group_name(orders: &[u32]) -> String {
    let parts: Vec<String> = orders.iter().map(|n| format!("Z{n}")).collect();
    parts.join(" x ")
}

pub fn text_bound(r: &BoundReportJson) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group            {}", group_name(&r.group.cyclic_orders));
    let _ = writeln!(out, "forbidden set    {}", tuples(&r.forbidden_members));
    let _ = writeln!(out, "bound            {:.12}", r.bound);
    let _ = writeln!(out, "null characters  {}", tuples(&r.null_characters));
    let _ = writeln!(out, "tolerance        {:.1e}", r.tolerances.general);
    out
}

pub fn text_verify(r: &VerifyReportJson) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group          {}", group_name(&r.group.cyclic_orders));
    let _ = writeln!(out, "forbidden set  {}", tuples(&r.forbidden_members));
    if r.valid {
        let _ = writeln!(out, "witness        valid");
        match r.bound {
            Some(bound) => {
                let _ = writeln!(out, "bound          {bound:.12}");
            }
            None => {
                let _ = writeln!(out, "bound          undefined (division by zero)");
            }
        }
    } else {
        let _ = writeln!(out, "witness        INVALID");
        if let Some(v) = &r.violations {
            let _ = writeln!(out, "violations     {v}");
        }
    }
    out
}

pub fn text_improve(r: &ImproveReportJson) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group            {}", group_name(&r.group.cyclic_orders));
    let _ = writeln!(out, "forbidden set    {}", tuples(&r.forbidden_members));
    let _ = writeln!(out, "prescribed set   {}", tuples(&r.prescribed_members));
    let _ = writeln!(out, "classical bound  {:.12}", r.classical_bound);
    let _ = writeln!(out, "quality Q        {:.12}", r.quality);
    let _ = writeln!(out, "improved bound   {:.12}", r.improved_bound);
    if !r.improvement_applied {
        let _ = writeln!(out, "note             Q too small; classical bound reported");
    }
    out
}

pub fn text_corollary(r: &CorollaryReportJson) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group          {}", group_name(&r.group.cyclic_orders));
    let _ = writeln!(out, "forbidden set  {}", tuples(&r.forbidden_members));
    let _ = writeln!(out, "pinned         {}", tuples(&r.pinned_members));
    let _ = writeln!(out, "m              {}", r.m);
    let _ = writeln!(out, "threshold      {:.12}", r.threshold);
    let _ = writeln!(out, "D              {}", tuples(&r.d_members));
    if r.excluded {
        let _ = writeln!(out, "verdict        no valid set containing the pinned points reaches m");
        match r.margin {
            Some(m) => {
                let _ = writeln!(out, "margin         {m:.12}");
            }
            None => {
                let _ = writeln!(out, "margin         (vacuous: D is empty)");
            }
        }
        if let Some(side) = &r.side {
            let _ = writeln!(out, "side           {side}");
        }
    } else {
        let _ = writeln!(out, "verdict        inconclusive");
        if let Some(reason) = &r.reason {
            let _ = writeln!(out, "reason         {reason}");
        }
    }
    out
}

/// Mirrors the argument chain step by step, margins included.
pub fn text_certificate(r: &CertificateJson) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "non-extendability certificate for the 6x6 Fourier family");
    let _ = writeln!(out, "parameters: a_phase = {}, b_phase = {}", r.a_phase, r.b_phase);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "1. constrained minimum of g0 = |<f0,u>|^2 over u = (1,e^ia,e^ib) with g1,g2 <= 6:"
    );
    let _ = writeln!(out, "   numeric     c = {:.15}  ({})", r.c_numeric, r.active_case);
    let _ = writeln!(out, "   closed form c = {:.15}", r.c_closed_form);
    let _ = writeln!(out, "   agreement       {:.3e}", r.c_agreement);
    let _ = writeln!(
        out,
        "   first-order residuals at the optimum <= {:.3e}",
        r.lagrange_residual_at_optimum
    );
    let _ = writeln!(out, "   c > 0.843 by {:.6e}", r.chain.c_above_0843);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "2. any vector unbiased to all six columns has s_j = |<z_up,f_j>|^2 in [c, 6-c],"
    );
    let _ = writeln!(
        out,
        "   s0+s1+s2 = 9, so s0^2+s1^2+s2^2 <= c^2+(6-c)^2+9 = {:.9}",
        r.s_square_cap
    );
    let _ = writeln!(out, "   cap < 37 by {:.6e}", r.chain.cap_below_37);
    let _ = writeln!(out);
    let _ = writeln!(out, "3. hence K(z) = (sum s_j^2 - 54)/486 <= k_cap = {:.12}", r.k_cap);
    let _ = writeln!(
        out,
        "   k_cap < -17/486 by {:.6e}; -17/486 < -1/30 by {:.6e}",
        r.chain.k_cap_below_17_over_486, r.chain.seventeen_486_vs_one_30
    );
    let _ = writeln!(out, "   margin below the exclusion threshold -1/30: {:.9}", r.margin);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "4. the six family columns have K-sum exactly 1, and any further column of a full"
    );
    let _ = writeln!(
        out,
        "   36-column system would be unbiased to all six, hence have K strictly below"
    );
    let _ = writeln!(
        out,
        "   -1/(36-6) by step 3; the one-sided exclusion test rules the extension out."
    );
    let _ = writeln!(
        out,
        "   the chain never references (a, b): ab_independent = {}",
        r.ab_independent
    );
    let _ = writeln!(out);
    if r.samples.is_empty() {
        let _ = writeln!(out, "spot checks: none requested");
    } else {
        let _ = writeln!(out, "spot checks ({} requested):", r.samples.len());
        for s in &r.samples {
            if s.found {
                let _ = writeln!(
                    out,
                    "   seed {:>4}  residual {:.2e}  K = {:+.9}  below cap: {}",
                    s.seed,
                    s.search_residual,
                    s.k_re.unwrap_or(f64::NAN),
                    s.below_k_cap
                );
            } else {
                let _ = writeln!(
                    out,
                    "   seed {:>4}  search inconclusive (best residual {:.2e})",
                    s.seed, s.search_residual
                );
            }
        }
        if !r.samples_complete {
            let _ = writeln!(out, "   (sample section incomplete; corroboration only)");
        }
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "verdict: {}", if r.verdict { "TRUE" } else { "NOT ESTABLISHED" });
    out
}

pub fn text_optimize_c(r: &OptimizeCReportJson) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "c numeric      {:.15}", r.c_numeric);
    let _ = writeln!(out, "c closed form  {:.15}", r.c_closed_form);
    let _ = writeln!(out, "agreement      {:.3e}", r.agreement);
    let _ = writeln!(out, "active case    {}", r.active_case);
    let _ = writeln!(
        out,
        "argmin         alpha = {:.12}, beta = {:.12}",
        r.argmin_alpha, r.argmin_beta
    );
    let _ = writeln!(
        out,
        "residuals      [{:.3e}, {:.3e}, {:.3e}, {:.3e}]",
        r.lagrange_residuals[0],
        r.lagrange_residuals[1],
        r.lagrange_residuals[2],
        r.lagrange_residuals[3]
    );
    let _ = writeln!(out, "refined        {}", r.refined);
    out
}

pub fn text_maxb(r: &MaxBReportJson) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group            {}", group_name(&r.group.cyclic_orders));
    let _ = writeln!(out, "forbidden set    {}", tuples(&r.forbidden_members));
    let _ = writeln!(out, "max cardinality  {}", r.max_cardinality);
    let _ = writeln!(out, "example          {}", tuples(&r.example));
    out
}
