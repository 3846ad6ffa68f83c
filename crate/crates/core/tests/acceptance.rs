//! Acceptance suite. Prints one line per criterion and exits non-zero if
//! any criterion fails or runs over its time limit.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chrono::{TimeZone, Utc};
use common::{fixture, iri, link_href, read_atom};
use ore_core::atom::{from_atom, to_atom, AtomProfile};
use ore_core::discovery::REL_RESOURCEMAP;
use ore_core::harvest::{
    archive_snapshot, discover, explain_knowledge, DiscoverOptions, Edge, FixtureFetcher,
    KnowledgeLevel, LinkGraph, SnapshotManifest,
};
use ore_core::model::{
    aggregation_uri, graph_equal, new_resource_map, rem_uri_from_aggregation, vocab,
};
use ore_core::ntriples::{from_ntriples, to_ntriples};
use ore_core::roundtrip::{fixpoint_check, AtomCodec, NTriplesCodec};
use ore_core::validate::{validate, Code};
use ore_core::{Iri, Literal, ResourceMapGraph, Term, Triple};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, Check); 7] = [
        (
            "figure-2-reproduction",
            Duration::from_secs(1),
            figure_2_reproduction,
        ),
        (
            "figure-1-validation",
            Duration::from_secs(1),
            figure_1_validation,
        ),
        (
            "round-trip-fixpoint",
            Duration::from_secs(30),
            round_trip_fixpoint,
        ),
        (
            "knowledge-classifier-oracle",
            Duration::from_secs(10),
            knowledge_oracle,
        ),
        ("discovery-recall", Duration::from_secs(5), discovery_recall),
        (
            "archive-snapshot",
            Duration::from_secs(1),
            archive_snapshot_digests,
        ),
        (
            "uri-convention-totality",
            Duration::from_secs(5),
            uri_convention,
        ),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (index, (name, limit, check)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {message}"))
        });
        let elapsed = started.elapsed();
        let (passed, detail) = match outcome {
            Ok(detail) if elapsed <= limit => (true, detail),
            Ok(detail) => (false, format!("{detail}; over time limit")),
            Err(detail) => (false, detail),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "{} {} {name}: {detail} ({:.3} s, limit {} s)",
            if passed { "PASS" } else { "FAIL" },
            index + 1,
            elapsed.as_secs_f64(),
            limit.as_secs(),
        );
    }
    println!("{} of 7 criteria passed", 7 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn figure_2_reproduction() -> Result<String, String> {
    let bytes = std::fs::read(fixture("figure2.atom")).map_err(|e| e.to_string())?;
    let graph = from_atom(&bytes).map_err(|e| e.to_string())?;
    let rem = iri("http://arxiv.org/rem/astro-ph/0601007v2");
    let agg = iri("http://arxiv.org/rem/astro-ph/0601007v2#aggregation");
    let t = |s: &Iri, p: &'static str, o: Term| Triple::new(s.clone(), vocab::iri(p), o);
    let expected: BTreeSet<Triple> = [
        t(
            &rem,
            vocab::RDF_TYPE,
            vocab::iri(vocab::ORE_RESOURCE_MAP).into(),
        ),
        t(
            &agg,
            vocab::RDF_TYPE,
            vocab::iri(vocab::ORE_AGGREGATION).into(),
        ),
        t(&rem, vocab::ORE_DESCRIBES, agg.clone().into()),
        t(&rem, vocab::DC_CREATOR, iri("http://arxiv.org/").into()),
        t(
            &rem,
            vocab::DCTERMS_MODIFIED,
            Literal::plain("2007-10-10T18:30:02Z").into(),
        ),
        t(
            &agg,
            vocab::ORE_AGGREGATES,
            iri("http://arxiv.org/ps/astro-ph/0601007v2").into(),
        ),
        t(
            &agg,
            vocab::ORE_AGGREGATES,
            iri("http://arxiv.org/pdf/astro-ph/0601007v2").into(),
        ),
    ]
    .into();
    ensure(graph.rem_uri() == &rem, || {
        format!("graph named {}", graph.rem_uri())
    })?;
    ensure(graph.triples() == &expected, || {
        format!(
            "parsed {} triples, expected exactly the 7 listed",
            graph.len()
        )
    })?;

    let out = to_atom(&graph, &AtomProfile::default()).map_err(|e| e.to_string())?;
    ensure(out.dropped.is_empty(), || {
        format!("{} triples dropped", out.dropped.len())
    })?;
    let original = read_atom(&bytes);
    let written = read_atom(&out.bytes);
    let fields = [
        (
            "self link",
            link_href(&written, "self") == link_href(&original, "self"),
        ),
        (
            "describes link",
            link_href(&written, "describes") == link_href(&original, "describes"),
        ),
        (
            "author uri",
            written.author_uris == ["http://arxiv.org/"]
                && written.author_uris == original.author_uris,
        ),
        (
            "updated",
            written.updated == ["2007-10-10T18:30:02Z"] && written.updated == original.updated,
        ),
        ("category", written.category == original.category),
        ("entry alternates", {
            let mut a = written.entry_alternates.clone();
            let mut b = original.entry_alternates.clone();
            a.sort();
            b.sort();
            a.len() == 2 && a == b
        }),
    ];
    for (field, matches) in fields {
        ensure(matches, || format!("reserialized {field} differs"))?;
    }
    Ok("7 triples, 6 feed fields match".into())
}

fn figure_1_validation() -> Result<String, String> {
    let text = std::fs::read_to_string(fixture("figure1.nt")).map_err(|e| e.to_string())?;
    let graph = from_ntriples(&text, None).map_err(|e| e.to_string())?;
    let report = validate(&graph);
    ensure(report.error_codes().is_empty(), || {
        format!("errors on the full fixture: {:?}", report.error_codes())
    })?;

    let rem = graph.rem_uri().clone();
    let agg = graph.aggregation_uri();
    let find = |s: &Iri, p: &str, o: Option<&str>| {
        graph
            .iter()
            .find(|t| {
                &t.subject == s
                    && t.predicate.as_str() == p
                    && o.is_none_or(|o| t.object.as_iri().is_some_and(|i| i.as_str() == o))
            })
            .cloned()
            .ok_or_else(|| format!("fixture lacks {s} {p}"))
    };
    let bootstrap = [
        (
            find(&rem, vocab::RDF_TYPE, Some(vocab::ORE_RESOURCE_MAP))?,
            Code::TypeRem,
        ),
        (
            find(&agg, vocab::RDF_TYPE, Some(vocab::ORE_AGGREGATION))?,
            Code::TypeAgg,
        ),
        (
            find(&rem, vocab::ORE_DESCRIBES, Some(agg.as_str()))?,
            Code::Describes,
        ),
        (find(&rem, vocab::DC_CREATOR, None)?, Code::CreatorMissing),
        (
            find(&rem, vocab::DCTERMS_MODIFIED, None)?,
            Code::ModifiedMissing,
        ),
    ];
    for (triple, code) in bootstrap {
        let mut reduced = graph.clone();
        reduced.remove(&triple);
        let errors = validate(&reduced).error_codes();
        ensure(errors == BTreeSet::from([code]), || {
            format!(
                "without {} {}: got {errors:?}, expected {code:?}",
                triple.subject, triple.predicate
            )
        })?;
    }
    Ok(format!(
        "{} triples valid, 5 removals give exactly their code",
        graph.len()
    ))
}

const DATETIMES: [&str; 5] = [
    "2008-01-15T10:01:19Z",
    "2007-10-10T18:30:02Z",
    "2008-02-29T23:59:59+05:30",
    "2006-05-31T12:52:00.125-04:00",
    "1999-12-31T23:59:60Z",
];

fn random_iri(rng: &mut ChaCha8Rng, host: &str, kind: &str) -> Iri {
    let n: u32 = rng.gen_range(0..100_000);
    let tail = ["", "?v=2", ".pdf", "/index.html", "/caf%C3%A9", "/é"];
    iri(&format!(
        "http://{host}/{kind}/{n}{}",
        tail.choose(rng).unwrap()
    ))
}

/// A valid Resource Map with 1 to 20 members and 0 to 10 extra triples
/// drawn from the ORE, DC, OWL and RDF vocabulary.
fn random_graph(rng: &mut ChaCha8Rng) -> ResourceMapGraph {
    let host = format!("h{}.example.org", rng.gen_range(0..50));
    let rem = random_iri(rng, &host, "rem");
    let creator: Term = if rng.gen_bool(0.5) {
        random_iri(rng, &host, "people").into()
    } else {
        Literal::plain(["Repository", "a < b & \"c\"", "Ünïcode"][rng.gen_range(0..3)]).into()
    };
    let modified = Literal::plain(*DATETIMES.choose(rng).unwrap());
    let mut graph = new_resource_map(rem.clone(), creator, modified).unwrap();
    let agg = graph.aggregation_uri();

    let members: Vec<Iri> = (0..rng.gen_range(1..=20))
        .map(|_| random_iri(rng, &host, "obj"))
        .collect();
    for m in &members {
        graph.insert(Triple::new(
            agg.clone(),
            vocab::iri(vocab::ORE_AGGREGATES),
            m.clone(),
        ));
    }

    let mut created = false;
    let mut rights = false;
    for _ in 0..rng.gen_range(0..=10) {
        let m = members.choose(rng).unwrap().clone();
        let other = members.choose(rng).unwrap().clone();
        let outside = random_iri(rng, "elsewhere.example.net", "x");
        let p = |c: &'static str| vocab::iri(c);
        let triple = match rng.gen_range(0..13) {
            0 if !created => {
                created = true;
                Triple::new(
                    rem.clone(),
                    p(vocab::DCTERMS_CREATED),
                    Literal::plain(*DATETIMES.choose(rng).unwrap()),
                )
            }
            1 if !rights => {
                rights = true;
                Triple::new(rem.clone(), p(vocab::DC_RIGHTS), outside)
            }
            2 => Triple::new(m, p(vocab::RDF_TYPE), p(vocab::ORE_AGGREGATED_RESOURCE)),
            3 => Triple::new(
                m,
                p(vocab::RDF_TYPE),
                iri("http://purl.org/dc/dcmitype/Text"),
            ),
            4 => Triple::new(
                m,
                p(vocab::ORE_IS_AGGREGATED_BY),
                iri(&format!(
                    "{}#aggregation",
                    outside.as_str().split('?').next().unwrap()
                )),
            ),
            5 => Triple::new(m, p(vocab::ORE_ANALOGOUS_TO), outside),
            6 => Triple::new(agg.clone(), p(vocab::OWL_SAME_AS), outside),
            7 => Triple::new(m, p(vocab::ORE_FROM_RESOURCE_MAP), outside),
            8 => Triple::new(m, p(vocab::DC_CREATOR), Literal::plain("<b>bold</b> & co")),
            // Aggregated resources in object position.
            9 => Triple::new(m, p(vocab::OWL_SAME_AS), other),
            10 => Triple::new(outside, p(vocab::ORE_ANALOGOUS_TO), other),
            11 => Triple::new(rem.clone(), p(vocab::ORE_ANALOGOUS_TO), other),
            _ => Triple::new(agg.clone(), p(vocab::ORE_ANALOGOUS_TO), outside),
        };
        graph.insert(triple);
    }
    graph
}

fn round_trip_fixpoint() -> Result<String, String> {
    const GRAPHS: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AE_2008);
    let profile = AtomProfile::default();
    let mut with_loss = 0;
    for case in 0..GRAPHS {
        let g = random_graph(&mut rng);
        let report = validate(&g);
        ensure(report.passed, || {
            format!(
                "case {case}: generator produced an invalid graph: {:?}",
                report.error_codes()
            )
        })?;

        let trip1 = to_atom(&g, &profile).map_err(|e| format!("case {case}: {e}"))?;
        let g1 = from_atom(&trip1.bytes).map_err(|e| format!("case {case}: {e}"))?;
        let lost: BTreeSet<&Triple> = g.triples().difference(g1.triples()).collect();
        let added: BTreeSet<&Triple> = g1.triples().difference(g.triples()).collect();
        let declared: BTreeSet<&Triple> = trip1.dropped.iter().collect();
        ensure(lost == declared && added.is_empty(), || {
            format!(
                "case {case}: lost {} triples, declared {}, added {}",
                lost.len(),
                declared.len(),
                added.len()
            )
        })?;
        if !lost.is_empty() {
            with_loss += 1;
        }
        let b2 = to_atom(&g1, &profile)
            .map_err(|e| format!("case {case}: {e}"))?
            .bytes;
        let g2 = from_atom(&b2).map_err(|e| format!("case {case}: {e}"))?;
        let b3 = to_atom(&g2, &profile)
            .map_err(|e| format!("case {case}: {e}"))?
            .bytes;
        let g3 = from_atom(&b3).map_err(|e| format!("case {case}: {e}"))?;
        ensure(graph_equal(&g1, &g2) && graph_equal(&g2, &g3), || {
            format!("case {case}: Atom trips 2 and 3 differ")
        })?;

        let atom =
            fixpoint_check(&g, &AtomCodec::default()).map_err(|e| format!("case {case}: {e}"))?;
        ensure(
            atom.passed() && atom.first_trip_dropped.len() == lost.len(),
            || {
                format!(
                    "case {case}: round-trip report disagrees: {}",
                    atom.to_text()
                )
            },
        )?;

        let nt = to_ntriples(&g);
        let back = from_ntriples(&nt, None).map_err(|e| format!("case {case}: {e}"))?;
        ensure(
            back.triples() == g.triples() && back.rem_uri() == g.rem_uri(),
            || format!("case {case}: N-Triples trip 1 changed the graph"),
        )?;
        let nt_report =
            fixpoint_check(&g, &NTriplesCodec).map_err(|e| format!("case {case}: {e}"))?;
        ensure(
            nt_report.passed() && nt_report.first_trip_dropped.is_empty(),
            || format!("case {case}: N-Triples report: {}", nt_report.to_text()),
        )?;
    }
    Ok(format!(
        "{GRAPHS} graphs, {with_loss} with declared Atom loss, all fixpoints by trip 2"
    ))
}

/// Knowledge level straight from the definitions, computed on the bit
/// pattern of the enumerated case rather than on a link graph.
fn oracle_level(
    n: usize,
    to_rem: &[bool],
    other_to_rem: &[bool],
    edge: &dyn Fn(usize, usize) -> bool,
) -> (KnowledgeLevel, Option<usize>) {
    let linkers: Vec<usize> = (0..n).filter(|&i| to_rem[i]).collect();
    if linkers.len() == n {
        return (KnowledgeLevel::Full, None);
    }
    if linkers.len() == 1 {
        let hub = linkers[0];
        let rest_point_at_hub = (0..n).filter(|&i| i != hub).all(|i| edge(i, hub));
        let rest_silent_about_rem = (0..n)
            .filter(|&i| i != hub)
            .all(|i| !to_rem[i] && !other_to_rem[i]);
        if rest_point_at_hub && rest_silent_about_rem {
            return (KnowledgeLevel::Indirect, Some(hub));
        }
    }
    if linkers.is_empty() {
        (KnowledgeLevel::Zero, None)
    } else {
        (KnowledgeLevel::Limited, None)
    }
}

fn knowledge_oracle() -> Result<String, String> {
    const MEMBER_RELS: [&str; 4] = ["up", "collection", "resourcemap", "alternate"];
    let rem = iri("http://e.org/rem");
    let member = |i: usize| iri(&format!("http://e.org/m{i}"));
    let mut cases = 0usize;
    let mut by_level: BTreeMap<KnowledgeLevel, usize> = BTreeMap::new();
    for n in 1..=3usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let bits = 2 * n + pairs.len();
        let members: BTreeSet<Iri> = (0..n).map(member).collect();
        for case in 0u32..(1 << bits) {
            let bit = |k: usize| case & (1 << k) != 0;
            let to_rem: Vec<bool> = (0..n).map(bit).collect();
            let other_to_rem: Vec<bool> = (0..n).map(|i| bit(n + i)).collect();
            let edge = |i: usize, j: usize| {
                let k = pairs.iter().position(|&p| p == (i, j)).unwrap();
                bit(2 * n + k)
            };

            let mut graph = LinkGraph::new();
            for i in 0..n {
                if to_rem[i] {
                    graph.insert(member(i), REL_RESOURCEMAP, rem.clone());
                }
                if other_to_rem[i] {
                    graph.insert(member(i), "describedby", rem.clone());
                }
            }
            for (k, &(i, j)) in pairs.iter().enumerate() {
                if edge(i, j) {
                    graph.insert(member(i), MEMBER_RELS[k % MEMBER_RELS.len()], member(j));
                }
            }

            let (level, hub) = oracle_level(n, &to_rem, &other_to_rem, &edge);
            let got = explain_knowledge(&rem, &members, &graph).map_err(|e| e.to_string())?;
            ensure(got.level == level && got.hub == hub.map(member), || {
                format!(
                    "n={n} case {case:b}: classifier {:?}/{:?}, oracle {level:?}/{hub:?}",
                    got.level, got.hub
                )
            })?;
            ensure(
                got.evidence
                    .iter()
                    .all(|e: &Edge| graph.contains(&e.source, &e.rel, &e.target)),
                || format!("n={n} case {case:b}: evidence edge not in the graph"),
            )?;
            *by_level.entry(level).or_default() += 1;
            cases += 1;
        }
    }
    let spread: Vec<String> = by_level.iter().map(|(l, c)| format!("{l} {c}")).collect();
    Ok(format!("{cases} link graphs agree ({})", spread.join(", ")))
}

fn discovery_recall() -> Result<String, String> {
    let dir = fixture("discovery");
    let fetcher =
        FixtureFetcher::from_routing_file(&dir.join("routes.tsv")).map_err(|e| e.to_string())?;
    let truth = std::fs::read_to_string(dir.join("expected.tsv")).map_err(|e| e.to_string())?;
    let options = DiscoverOptions {
        confirm: true,
        ..Default::default()
    };
    let (mut relevant, mut found, mut false_positives, mut fixtures) = (0, 0, 0, 0);
    let mut flagged: BTreeSet<String> = BTreeSet::new();
    for line in truth
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
    {
        let fields: Vec<&str> = line.split('\t').collect();
        let [start, maps, findings] = fields[..] else {
            return Err(format!("bad truth line {line:?}"));
        };
        let words = |s: &str| -> BTreeSet<String> {
            s.split_whitespace()
                .filter(|w| *w != "-")
                .map(String::from)
                .collect()
        };
        let (expected_maps, expected_findings) = (words(maps), words(findings));

        let report = discover(&fetcher, &iri(start), options);
        let confirmed: BTreeSet<String> = report
            .confirmed()
            .map(|h| h.rem_candidate.to_string())
            .collect();
        let codes: BTreeSet<String> = report
            .findings
            .iter()
            .map(|f| f.code.as_str().to_string())
            .collect();
        relevant += expected_maps.len();
        found += expected_maps.intersection(&confirmed).count();
        false_positives += confirmed.difference(&expected_maps).count();
        ensure(codes == expected_findings, || {
            format!("{start}: findings {codes:?}, expected {expected_findings:?}")
        })?;
        ensure(confirmed == expected_maps, || {
            format!("{start}: confirmed {confirmed:?}, expected {expected_maps:?}")
        })?;
        flagged.extend(codes);
        fixtures += 1;
    }
    ensure(fixtures == 20, || format!("corpus has {fixtures} fixtures"))?;
    for code in [Code::EntryIdIsRem, Code::FeedIsRem] {
        ensure(flagged.contains(code.as_str()), || {
            format!("{} never flagged", code.as_str())
        })?;
    }
    ensure(found == relevant && false_positives == 0, || {
        format!("recall {found}/{relevant}, {false_positives} false positives")
    })?;
    Ok(format!("{fixtures} fixtures, recall {found}/{relevant}, 0 false positives, separation violations flagged"))
}

fn snapshot(site: &Path, out: &Path) -> Result<SnapshotManifest, String> {
    let fetcher =
        FixtureFetcher::from_routing_file(&site.join("routes.tsv")).map_err(|e| e.to_string())?;
    let at = Utc.with_ymd_and_hms(2008, 3, 2, 9, 0, 0).unwrap();
    archive_snapshot(
        &fetcher,
        &iri("http://example.org/rem/article-1"),
        out,
        at,
        4,
    )
    .map_err(|e| e.to_string())
}

fn digests(manifest: &SnapshotManifest) -> BTreeMap<String, Option<String>> {
    manifest
        .entries
        .iter()
        .map(|e| (e.iri.to_string(), e.digest.clone()))
        .collect()
}

fn archive_snapshot_digests() -> Result<String, String> {
    let temp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let site = temp.path().join("site");
    std::fs::create_dir(&site).map_err(|e| e.to_string())?;
    for entry in std::fs::read_dir(fixture("site")).map_err(|e| e.to_string())? {
        let entry = entry.map_err(|e| e.to_string())?;
        std::fs::copy(entry.path(), site.join(entry.file_name())).map_err(|e| e.to_string())?;
    }
    let first = snapshot(&site, &temp.path().join("one"))?;
    let second = snapshot(&site, &temp.path().join("two"))?;
    ensure(first.entries.len() == 4, || {
        format!("{} manifest entries", first.entries.len())
    })?;
    ensure(first.entries.iter().all(|e| e.digest.is_some()), || {
        "an entry has no digest".into()
    })?;
    ensure(digests(&first) == digests(&second), || {
        "repeat snapshot digests differ".into()
    })?;
    ensure(first.to_text() == second.to_text(), || {
        "repeat manifests differ".into()
    })?;

    let mut csv = std::fs::read(site.join("data.csv")).map_err(|e| e.to_string())?;
    csv.extend_from_slice(b"4,5,6\n");
    std::fs::write(site.join("data.csv"), csv).map_err(|e| e.to_string())?;
    let third = snapshot(&site, &temp.path().join("three"))?;
    let (before, after) = (digests(&first), digests(&third));
    let changed: Vec<&String> = before
        .keys()
        .filter(|k| before[*k] != after.get(*k).cloned().flatten())
        .collect();
    ensure(changed == ["http://example.org/article-1/data.csv"], || {
        format!("changed digests: {changed:?}")
    })?;
    Ok("4 entries, repeat identical, mutation changes 1 digest".into())
}

fn random_fragment_free(rng: &mut ChaCha8Rng) -> String {
    const PATH_CHARS: &[&str] = &[
        "a", "Z", "0", "-", ".", "_", "~", "%20", "%C3%A9", "é", "ü", "日", "!", "$", "&", "'",
        "(", ")", "*", "+", ",", ";", "=", ":", "@", "/",
    ];
    let mut path = String::new();
    for _ in 0..rng.gen_range(0..30) {
        path.push_str(PATH_CHARS.choose(rng).unwrap());
    }
    let query = if rng.gen_bool(0.3) {
        format!("?q={}&n={}", rng.gen_range(0..1000), rng.gen::<u16>())
    } else {
        String::new()
    };
    match rng.gen_range(0..5) {
        0 => format!(
            "http://host{}.example.org/{path}{query}",
            rng.gen_range(0..100)
        ),
        1 => format!(
            "https://example.com:{}/{path}{query}",
            rng.gen_range(1..65535)
        ),
        2 => format!(
            "urn:uuid:{:08x}-{:04x}-4{:03x}-a{:03x}-{:012x}",
            rng.gen::<u32>(),
            rng.gen::<u16>(),
            rng.gen_range(0..0x1000),
            rng.gen_range(0..0x1000),
            rng.gen_range(0..1u64 << 48)
        ),
        3 => format!("tag:example.org,2008:{}{query}", path.replace('/', "_")),
        _ => format!("ftp://[2001:db8::{:x}]/{path}", rng.gen::<u16>()),
    }
}

fn uri_convention() -> Result<String, String> {
    const IRIS: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let fragments = ["", "aggregation", "x", "sec-1.2", "%20", "é"];
    for _ in 0..IRIS {
        let text = random_fragment_free(&mut rng);
        let rem =
            Iri::parse(text.clone()).map_err(|e| format!("generator produced {text:?}: {e}"))?;
        let agg = aggregation_uri(&rem).map_err(|e| format!("{text}: {e}"))?;
        let back = rem_uri_from_aggregation(&agg).map_err(|e| format!("{agg}: {e}"))?;
        ensure(back == rem, || format!("{text} came back as {back}"))?;

        let with_fragment = format!("{text}#{}", fragments.choose(&mut rng).unwrap());
        let fragmented =
            Iri::parse(with_fragment.clone()).map_err(|e| format!("{with_fragment}: {e}"))?;
        ensure(aggregation_uri(&fragmented).is_err(), || {
            format!("{with_fragment} was accepted")
        })?;
    }
    Ok(format!(
        "{IRIS} IRIs round trip, {IRIS} fragment IRIs rejected"
    ))
}
