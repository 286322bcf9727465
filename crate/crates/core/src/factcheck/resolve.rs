//! Attaching pronouns and implied subjects to the entities they refer to.

use super::lexicon::MentionKind;
use super::{Claim, Doc, EntityKind, EntityRef, Mention};
use crate::annotation::TokenizedText;
use crate::game::GameData;

fn wanted(m: &Mention, wants: EntityKind) -> bool {
    match wants {
        EntityKind::Player => m.is_player_like(),
        EntityKind::Team => m.is_team_like(),
        EntityKind::PronounUnresolved => false,
    }
}

/// Referent of every mention: named mentions refer to themselves, pronouns
/// to the nearest preceding compatible mention in the same sentence or the
/// one before (following chains of pronouns).
fn referents(doc: &Doc<'_>) -> Vec<Option<usize>> {
    let mut out: Vec<Option<usize>> = Vec::with_capacity(doc.mentions.len());
    for (mi, m) in doc.mentions.iter().enumerate() {
        if !m.is_pronoun() {
            out.push(Some(mi));
            continue;
        }
        let wants = if matches!(m.kind, MentionKind::PlayerPronoun) { EntityKind::Player } else { EntityKind::Team };
        let object_form = matches!(doc.lower[m.span.start].as_str(), "them" | "themselves" | "him" | "himself");
        let clause_start = (0..m.span.start)
            .rev()
            .find(|&j| matches!(doc.lower[j].as_str(), "," | ";" | "." | "!" | "?" | "(" | ")"))
            .map_or(0, |j| j + 1);
        let found = (0..mi).rev().find(|&j| {
            let c = &doc.mentions[j];
            c.sentence + 1 >= m.sentence
                && wanted(c, wants)
                && !(object_form && c.span.start >= clause_start && !c.is_pronoun())
        });
        out.push(found.and_then(|j| out[j]));
    }
    out
}

fn named_ref(doc: &Doc<'_>, game: &GameData, mi: usize) -> Option<EntityRef> {
    let m = &doc.mentions[mi];
    let base = |kind| EntityRef { kind, implicit: true, ..EntityRef::unresolved(kind, None) };
    Some(match &m.kind {
        MentionKind::Player { index } => {
            let p = &game.players[*index];
            EntityRef { resolved_name: Some(p.name.clone()), side: Some(p.side), ..base(EntityKind::Player) }
        }
        MentionKind::Misnamed { candidates } => {
            let names: Vec<String> = candidates.iter().map(|&i| game.players[i].name.clone()).collect();
            EntityRef {
                resolved_name: names.first().cloned(),
                side: candidates.first().map(|&i| game.players[i].side),
                misnamed: true,
                candidates: names,
                ..base(EntityKind::Player)
            }
        }
        MentionKind::UnknownPerson => EntityRef {
            resolved_name: Some(doc.tokens[m.span.start..=m.span.end].join(" ")),
            unknown: true,
            ..base(EntityKind::Player)
        },
        MentionKind::Team { side, name } => {
            EntityRef { resolved_name: Some(name.clone()), side: *side, unknown: side.is_none(), ..base(EntityKind::Team) }
        }
        MentionKind::PlayerPronoun | MentionKind::TeamPronoun => return None,
    })
}

/// Resolves pronoun and implicit subjects; anything left over keeps the
/// kind `PronounUnresolved`.
pub fn resolve_claim_subjects(claims: Vec<Claim>, text: &TokenizedText, game: &GameData) -> Vec<Claim> {
    let doc = Doc::new(&text.tokens, game);
    let refs = referents(&doc);
    claims
        .into_iter()
        .map(|mut claim| {
            let subject = &claim.subject;
            if subject.kind != EntityKind::PronounUnresolved || subject.wants == EntityKind::PronounUnresolved {
                return claim;
            }
            let target = match subject.span {
                Some(span) => doc.mention_at[span.start].and_then(|mi| refs[mi]),
                None => {
                    let anchor = claim.span.start;
                    (0..doc.mentions.len())
                        .rev()
                        .find(|&j| {
                            let c = &doc.mentions[j];
                            c.span.end < anchor && c.sentence + 1 >= claim.sentence && wanted(c, subject.wants)
                        })
                        .and_then(|j| refs[j])
                }
            };
            if let Some(resolved) = target.and_then(|mi| named_ref(&doc, game, mi)) {
                claim.subject = EntityRef { span: subject.span, ..resolved };
            }
            claim
        })
        .collect()
}
