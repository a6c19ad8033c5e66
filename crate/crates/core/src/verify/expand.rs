use crate::appell::{fps_crank_series, fps_series, lp_series};
use crate::error::{Error, Result};
use crate::exact::{rat, rat_int};
use crate::modular::upk;
use crate::partitions::{crank_deviation_closed_form, expand_terms, rank_deviation_closed_form};
use crate::qseries::{EtaSpec, PSeries};
use crate::theorems::{hauptmodul, PartEngine, PartKind, Path};

/// Target grammar for `qrank expand`:
///
/// | target          | series                                               |
/// |-----------------|------------------------------------------------------|
/// | `D(a,M)`        | rank deviation from its closed form                  |
/// | `D(a,M,k)`      | its `M n + k` dissection, reindexed to `q^n`         |
/// | `Dc(a,M[,k])`   | the crank analogue                                   |
/// | `L(p,v)`        | `L_p(v)`                                             |
/// | `F(p,s)`        | the rank-side generating function                    |
/// | `Fc(p,s)`       | the crank-side generating function                   |
/// | `N5(1,0)`       | a dissection part, `N` or `M` (combinatorial path)   |
/// | `t@5`, `t@7`    | the eta quotient used for the polynomial fits        |
/// | `eta:{json}`    | an eta quotient in the serialized `EtaSpec` format   |
pub fn expand_target(target: &str, order: i64) -> Result<PSeries> {
    let t = target.trim();
    let o = rat_int(order);
    if let Some(js) = t.strip_prefix("eta:") {
        let spec: EtaSpec =
            serde_json::from_str(js).map_err(|e| Error::Parse(format!("eta spec: {e}")))?;
        return spec.expand(&o);
    }
    if let Some(p) = t.strip_prefix("t@") {
        return hauptmodul(parse_int(p)?)?.expand(&o);
    }
    let (head, args) = split_call(t)?;
    match (head, args.as_slice()) {
        ("D", [a, m]) => expand_terms(&rank_deviation_closed_form(*a, *m)?, &o),
        ("Dc", [a, m]) => expand_terms(&crank_deviation_closed_form(*a, *m)?, &o),
        ("D" | "Dc", [a, m, k]) => {
            if !(0..*m).contains(k) {
                return Err(Error::Domain(format!("residue {k} outside 0..{m}")));
            }
            let inner = rat_int(m * order + k);
            let terms = if head == "D" {
                rank_deviation_closed_form(*a, *m)?
            } else {
                crank_deviation_closed_form(*a, *m)?
            };
            let f = expand_terms(&terms, &inner)?;
            Ok(upk(&f, *m, *k)?.shift(&rat(-k, *m)).truncate(&o))
        }
        ("L", [p, v]) => lp_series(*p, *v, &o),
        ("F", [p, s]) => fps_series(*p, *s, &o),
        ("Fc", [p, s]) => fps_crank_series(*p, *s, &o),
        (h, [s, k]) if h.len() > 1 && (h.starts_with('N') || h.starts_with('M')) => {
            let kind = if h.starts_with('N') {
                PartKind::NT
            } else {
                PartKind::MW
            };
            let p = parse_int(&h[1..])?;
            if order < 0 {
                return Err(Error::Domain("parts need a non-negative order".into()));
            }
            PartEngine::new(p, order as usize)?.part(kind, *s, *k, Path::Combinatorial)
        }
        _ => Err(Error::Parse(format!("unknown target '{target}'"))),
    }
}

fn parse_int(s: &str) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected an integer, got '{s}'")))
}

fn split_call(t: &str) -> Result<(&str, Vec<i64>)> {
    let open = t
        .find('(')
        .ok_or_else(|| Error::Parse(format!("unknown target '{t}'")))?;
    let inner = t[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| Error::Parse(format!("unbalanced target '{t}'")))?;
    let args = inner
        .split(',')
        .map(parse_int)
        .collect::<Result<Vec<_>>>()?;
    Ok((&t[..open], args))
}
