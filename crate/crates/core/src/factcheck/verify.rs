//! Checking claims against the box score and turning refuted claims into
//! mistakes.

use std::collections::BTreeMap;

use super::{Claim, ClaimValue, EntityKind, EntityRef, LedScope, Property, ShotKind, Span, Verdict, VerdictStatus};
use crate::annotation::{select_minimal_annotation, AnnotationCandidate, Mistake, MistakeCategory, MistakeList};
use crate::game::{double_double_status, leaders_among, weekday_name, DoubleStatus, GameData, Period, PlayerLine, Side};

struct Eval {
    status: VerdictStatus,
    expected: Option<String>,
    mistakes: Vec<Mistake>,
}

impl Eval {
    fn supported() -> Self {
        Eval { status: VerdictStatus::Supported, expected: None, mistakes: vec![] }
    }

    fn uncheckable() -> Self {
        Eval { status: VerdictStatus::Uncheckable, expected: None, mistakes: vec![] }
    }

    fn refuted(expected: impl Into<String>, mistakes: Vec<Mistake>) -> Self {
        Eval { status: VerdictStatus::Refuted, expected: Some(expected.into()), mistakes }
    }
}

fn mistake(claim: &Claim, span: Span, category: MistakeCategory, note: impl Into<String>) -> Mistake {
    Mistake::new(claim.doc_id.clone(), span.start, span.end, category).with_note(note)
}

fn trigger_span(claim: &Claim) -> Span {
    claim.trigger.unwrap_or(claim.span)
}

fn word(claim: &Claim, expected: impl Into<String>) -> Eval {
    let expected = expected.into();
    let m = mistake(claim, trigger_span(claim), MistakeCategory::Word, format!("expected {expected}"));
    Eval::refuted(expected, vec![m])
}

/// Compares claimed numbers with the true ones, one Number mistake per
/// differing value.
fn numbers(claim: &Claim, claimed: &[u32], actual: &[u32]) -> Eval {
    let mistakes: Vec<Mistake> = claimed
        .iter()
        .zip(actual)
        .zip(&claim.value_spans)
        .filter(|((c, a), _)| c != a)
        .map(|((_, a), &span)| mistake(claim, span, MistakeCategory::Number, format!("expected {a}")))
        .collect();
    if mistakes.is_empty() {
        Eval::supported()
    } else {
        let expected = actual.iter().map(u32::to_string).collect::<Vec<_>>().join("-");
        Eval::refuted(expected, mistakes)
    }
}

fn shooting(p: &PlayerLine, shot: ShotKind) -> (u32, u32) {
    let s = match shot {
        ShotKind::FieldGoals => p.field_goals,
        ShotKind::ThreePointers => p.three_pointers,
        ShotKind::FreeThrows => p.free_throws,
    };
    (s.made, s.attempted)
}

fn contains(leaders: &[&PlayerLine], p: &PlayerLine) -> bool {
    leaders.iter().any(|l| l.name == p.name)
}

/// Score pair checked both ways round unless a subject fixes the order;
/// a pair matching neither is flagged in the closer orientation, the
/// leader's score first on ties.
fn score_pair(claim: &Claim, subject: Option<Side>, period: Period, x: u32, y: u32, game: &GameData) -> Eval {
    let cmp = game.period_comparison(period);
    if let (Some(side), false) = (subject, period == Period::Game) {
        return numbers(claim, &[x, y], &[cmp.points(side), cmp.points(side.other())]);
    }
    let first = cmp.leader().unwrap_or(Side::Home);
    let orientations = [
        [cmp.points(first), cmp.points(first.other())],
        [cmp.points(first.other()), cmp.points(first)],
    ];
    let evals: Vec<Eval> = orientations.iter().map(|o| numbers(claim, &[x, y], o)).collect();
    evals.into_iter().min_by_key(|e| e.mistakes.len()).expect("two orientations")
}

fn team_side(subject: &EntityRef) -> Option<Side> {
    (subject.kind == EntityKind::Team && !subject.unknown).then_some(subject.side).flatten()
}

fn eval(claim: &Claim, subject: &EntityRef, game: &GameData) -> Eval {
    if !claim.property.is_checkable() {
        let m = mistake(claim, claim.value_spans.first().copied().unwrap_or(claim.span), MistakeCategory::NotCheckable, "not in the box score");
        return Eval { status: VerdictStatus::Uncheckable, expected: None, mistakes: vec![m] };
    }
    match claim.property {
        Property::DayOfWeek => {
            return match claim.value {
                ClaimValue::Weekday(d) if d != game.day_of_week => {
                    let expected = weekday_name(game.day_of_week);
                    let m = mistake(claim, claim.value_spans[0], MistakeCategory::Name, format!("expected {expected}"));
                    Eval::refuted(expected, vec![m])
                }
                _ => Eval::supported(),
            };
        }
        Property::PeriodScore { period } if subject.kind == EntityKind::Team && subject.side.is_none() && !subject.unknown => {
            return match claim.value {
                ClaimValue::Pair(x, y) => score_pair(claim, None, period, x, y, game),
                _ => Eval::uncheckable(),
            };
        }
        _ => {}
    }
    if subject.kind == EntityKind::PronounUnresolved {
        return Eval::uncheckable();
    }
    if subject.unknown {
        return match subject.span.filter(|_| !subject.implicit) {
            Some(span) => {
                let who = subject.resolved_name.clone().unwrap_or_default();
                let m = mistake(claim, span, MistakeCategory::Name, format!("{who} did not play in this game"));
                Eval::refuted("a participant of this game", vec![m])
            }
            None => Eval::uncheckable(),
        };
    }
    let mut result = match subject.kind {
        EntityKind::Player => {
            let Some(p) = subject.resolved_name.as_deref().and_then(|n| game.player(n)) else { return Eval::uncheckable() };
            eval_player(claim, p, game)
        }
        EntityKind::Team => match team_side(subject) {
            Some(side) => eval_team(claim, side, game),
            None => Eval::uncheckable(),
        },
        EntityKind::PronounUnresolved => Eval::uncheckable(),
    };
    // A team on the wrong side of a comparison, or one that did not play.
    if let Some(object) = &claim.object {
        let own = match subject.kind {
            EntityKind::Player => subject.resolved_name.as_deref().and_then(|n| game.player(n)).map(|p| p.side),
            _ => subject.side,
        };
        let wrong = match claim.property {
            Property::Defeated | Property::OutScored { .. } => object.unknown || (own.is_some() && object.side == own),
            Property::Led { .. } => object.unknown || (own.is_some() && object.side.is_some() && object.side != own),
            _ => false,
        };
        if let (true, Some(span)) = (wrong && object.kind == EntityKind::Team, object.span.filter(|_| !object.implicit)) {
            let expected = own.map(|s| {
                let side = if matches!(claim.property, Property::Led { .. }) { s } else { s.other() };
                game.team(side).full_name()
            });
            let note = expected.clone().map_or_else(|| "wrong team".to_string(), |e| format!("expected {e}"));
            let m = mistake(claim, span, MistakeCategory::Name, note);
            if matches!(claim.property, Property::Led { .. }) {
                // The named team is the error, not the leading.
                result = Eval::refuted(expected.unwrap_or_default(), vec![m]);
            } else {
                result.status = VerdictStatus::Refuted;
                result.expected = result.expected.or(expected);
                result.mistakes.push(m);
            }
        }
    }
    result
}

fn eval_player(claim: &Claim, p: &PlayerLine, game: &GameData) -> Eval {
    match (claim.property, &claim.value) {
        (Property::Stat { stat }, ClaimValue::Int(x)) => numbers(claim, &[*x], &[p.stat(stat)]),
        (Property::Shooting { shot }, value) => {
            let (made, attempted) = shooting(p, shot);
            match value {
                ClaimValue::Int(x) => numbers(claim, &[*x], &[made]),
                ClaimValue::Pair(x, y) => numbers(claim, &[*x, *y], &[made, attempted]),
                _ => Eval::uncheckable(),
            }
        }
        (Property::Led { scope, stat, .. }, ClaimValue::Bool(true)) => {
            let side = p.side;
            let leaders = match scope {
                LedScope::Team => game.team_leaders(side, stat).unwrap_or_default(),
                LedScope::Bench => {
                    if p.starter {
                        vec![]
                    } else {
                        leaders_among(game.roster(side).filter(|q| !q.starter), stat).unwrap_or_default()
                    }
                }
                LedScope::All => leaders_among(game.players.iter(), stat).unwrap_or_default(),
            };
            if contains(&leaders, p) {
                Eval::supported()
            } else {
                let names: Vec<&str> = leaders.iter().map(|l| l.name.as_str()).collect();
                word(claim, format!("{} led in {stat}", names.join(", ")))
            }
        }
        (Property::DoubleDouble | Property::TripleDouble, ClaimValue::Bool(true)) => {
            let wanted = if claim.property == Property::DoubleDouble { DoubleStatus::DoubleDouble } else { DoubleStatus::TripleDouble };
            match double_double_status(p) {
                Ok(status) if status == wanted => Eval::supported(),
                Ok(status) => word(claim, format!("{status:?}")),
                Err(_) => word(claim, "did not play"),
            }
        }
        _ => Eval::uncheckable(),
    }
}

fn eval_team(claim: &Claim, side: Side, game: &GameData) -> Eval {
    let team = game.team(side);
    let outcome = game.game_outcome().ok();
    match (claim.property, &claim.value) {
        (Property::TeamTotal, ClaimValue::Int(x)) => numbers(claim, &[*x], &[team.total_points]),
        (Property::PeriodScore { period }, ClaimValue::Int(x)) => {
            numbers(claim, &[*x], &[game.period_comparison(period).points(side)])
        }
        (Property::PeriodScore { period }, ClaimValue::Pair(x, y)) => score_pair(claim, Some(side), period, *x, *y, game),
        (Property::RecordWins, ClaimValue::Int(x)) => numbers(claim, &[*x], &[team.wins]),
        (Property::RecordLosses, ClaimValue::Int(x)) => numbers(claim, &[*x], &[team.losses]),
        (Property::Defeated, ClaimValue::Bool(won)) => match outcome {
            Some(o) if (o.winner == side) == *won => Eval::supported(),
            Some(o) => word(claim, format!("{} won", game.team(o.winner).full_name())),
            None => Eval::uncheckable(),
        },
        (Property::OutScored { period }, ClaimValue::Bool(true)) => {
            let leader = game.period_comparison(period).leader();
            if leader == Some(side) {
                Eval::supported()
            } else {
                let who = leader.map_or_else(|| "neither team".to_string(), |s| game.team(s).full_name());
                word(claim, format!("{who} outscored in {period}"))
            }
        }
        (Property::Led { period: Some(period), .. }, ClaimValue::Bool(true)) => {
            if game.period_comparison(period).leader() == Some(side) {
                Eval::supported()
            } else {
                word(claim, format!("{} did not lead", team.full_name()))
            }
        }
        (Property::HomeGame, ClaimValue::Bool(home)) => {
            if (side == Side::Home) == *home {
                Eval::supported()
            } else {
                word(claim, if side == Side::Home { "home game" } else { "road game" })
            }
        }
        (Property::GameCity, ClaimValue::Text(_)) => {
            if side == Side::Home {
                Eval::supported()
            } else {
                let expected = game.home.city.clone();
                let m = mistake(claim, claim.value_spans[0], MistakeCategory::Name, format!("expected {expected}"));
                Eval::refuted(expected, vec![m])
            }
        }
        _ => Eval::uncheckable(),
    }
}

fn player_ref(p: &PlayerLine, like: &EntityRef) -> EntityRef {
    EntityRef {
        resolved_name: Some(p.name.clone()),
        side: Some(p.side),
        misnamed: false,
        unknown: false,
        candidates: vec![],
        ..like.clone()
    }
}

/// Other entities a named subject could have been confused with.
fn alternatives(subject: &EntityRef, game: &GameData) -> Vec<EntityRef> {
    match subject.kind {
        EntityKind::Player => game
            .players
            .iter()
            .filter(|p| p.played && Some(p.name.as_str()) != subject.resolved_name.as_deref())
            .map(|p| player_ref(p, subject))
            .collect(),
        EntityKind::Team => match subject.side {
            Some(side) => {
                let other = side.other();
                vec![EntityRef { side: Some(other), resolved_name: Some(game.team(other).full_name()), ..subject.clone() }]
            }
            None => vec![],
        },
        EntityKind::PronounUnresolved => vec![],
    }
}

/// Verifies every claim. Claims sharing a named subject are judged
/// together: a misnamed player takes the reading with the fewest mistakes,
/// and a subject with several refuted claims is replaced by another entity
/// when one Name mistake explains them better.
pub fn verify_claims(claims: &[Claim], game: &GameData) -> Vec<Verdict> {
    let mut verdicts: Vec<Verdict> = claims
        .iter()
        .map(|c| {
            let e = eval(c, &c.subject, game);
            Verdict { claim: c.clone(), status: e.status, expected: e.expected, emitted: e.mistakes }
        })
        .collect();

    let mut groups: BTreeMap<Span, Vec<usize>> = BTreeMap::new();
    for (i, c) in claims.iter().enumerate() {
        if let Some(span) = c.subject.span.filter(|_| c.subject.is_named() && !c.subject.unknown) {
            if c.property.is_checkable() && c.subject.kind != EntityKind::PronounUnresolved {
                groups.entry(span).or_default().push(i);
            }
        }
    }

    for (span, idxs) in groups {
        let subject = &claims[idxs[0]].subject;
        let doc_id = &claims[idxs[0]].doc_id;
        let current: Vec<Mistake> = idxs.iter().flat_map(|&i| verdicts[i].emitted.clone()).collect();
        let alts: Vec<EntityRef> = if subject.misnamed {
            subject
                .candidates
                .iter()
                .filter_map(|n| game.player(n))
                .map(|p| player_ref(p, subject))
                .collect()
        } else if idxs.len() >= 2 && current.len() >= 2 {
            alternatives(subject, game)
        } else {
            continue;
        };
        let evaluated: Vec<(EntityRef, Vec<Eval>)> = alts
            .into_iter()
            .map(|alt| {
                let evals = idxs.iter().map(|&i| eval(&claims[i], &alt, game)).collect();
                (alt, evals)
            })
            .collect();
        let name_fix = |alt: &EntityRef| {
            let who = alt.resolved_name.clone().unwrap_or_default();
            Mistake::new(doc_id.clone(), span.start, span.end, MistakeCategory::Name).with_note(format!("expected {who}"))
        };
        let mut candidates: Vec<AnnotationCandidate> = Vec::new();
        if !subject.misnamed {
            candidates.push(AnnotationCandidate::new(current));
        }
        for (alt, evals) in &evaluated {
            let mut ms = vec![name_fix(alt)];
            ms.extend(evals.iter().flat_map(|e| e.mistakes.iter().cloned()));
            candidates.push(AnnotationCandidate::new(ms));
        }
        let Ok(best) = select_minimal_annotation(&candidates) else { continue };
        let chosen = candidates.iter().position(|c| std::ptr::eq(c, best)).expect("selected from candidates");
        let offset = usize::from(!subject.misnamed);
        if chosen < offset {
            continue;
        }
        let (alt, evals) = &evaluated[chosen - offset];
        for (k, (&i, e)) in idxs.iter().zip(evals).enumerate() {
            let v = &mut verdicts[i];
            v.claim.subject = alt.clone();
            v.emitted = e.mistakes.clone();
            v.expected = e.expected.clone();
            v.status = e.status;
            if k == 0 {
                v.emitted.insert(0, name_fix(alt));
                v.status = VerdictStatus::Refuted;
                v.expected.get_or_insert_with(|| alt.resolved_name.clone().unwrap_or_default());
            }
        }
    }
    verdicts
}

/// One mistake per token: where spans overlap the higher-priority category
/// wins, then the earlier and shorter span.
pub(crate) fn normalize(mut mistakes: Vec<Mistake>) -> MistakeList {
    mistakes.sort_by_key(|m| (m.category.priority(), m.start, m.end));
    let mut kept: Vec<Mistake> = Vec::new();
    for m in mistakes {
        if !kept.iter().any(|k| k.doc_id == m.doc_id && k.overlaps(&m)) {
            kept.push(m);
        }
    }
    let mut list = MistakeList::new(kept);
    list.sort();
    list
}
