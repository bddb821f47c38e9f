use super::{behavior_entries, behavior_seeds, GraphError, NodeKind, Relation, Target};
use crate::corpus::Corpus;
use crate::detect::UploaderVerdict;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Write as _;

/// Entry counts for one relation and one actor role. Every entry lands in
/// exactly one of `self_`, `to_uploaders`, `to_commenters`, `external`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationTally {
    pub total: usize,
    pub self_: usize,
    pub to_uploaders: usize,
    pub to_commenters: usize,
    pub external: usize,
}

/// Behavior tallies for like, subscribe and playlist, split by actor role.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BehaviorTallies {
    pub seed_uploaders: usize,
    pub seed_commenters: usize,
    /// Indexed `[relation][role]` in `Relation::BEHAVIORS` order, uploaders
    /// first.
    pub tallies: [[RelationTally; 2]; 3],
}

fn relation_slot(r: Relation) -> usize {
    Relation::BEHAVIORS
        .iter()
        .position(|&b| b == r)
        .expect("behavior relation")
}

fn role_slot(k: NodeKind) -> usize {
    match k {
        NodeKind::Uploader => 0,
        _ => 1,
    }
}

impl BehaviorTallies {
    pub fn get(&self, relation: Relation, role: NodeKind) -> RelationTally {
        self.tallies[relation_slot(relation)][role_slot(role)]
    }
}

/// Counts every like, subscription and playlist entry of every seed user by
/// where it points. Dual-role users count as uploaders.
pub fn behavior_tallies(
    corpus: &Corpus,
    verdicts: &[UploaderVerdict],
    commenter_flags: &BTreeSet<String>,
) -> Result<BehaviorTallies, GraphError> {
    let seeds = behavior_seeds(corpus, verdicts, commenter_flags)?;
    let mut out = BehaviorTallies::default();
    for info in seeds.values() {
        match info.kind {
            NodeKind::Uploader => out.seed_uploaders += 1,
            _ => out.seed_commenters += 1,
        }
    }
    for rel in Relation::BEHAVIORS {
        for (actor, target) in behavior_entries(corpus, &seeds, rel) {
            let t = &mut out.tallies[relation_slot(rel)][role_slot(seeds[actor].kind)];
            t.total += 1;
            match target {
                Target::SelfRef => t.self_ += 1,
                Target::External => t.external += 1,
                Target::Seed(id) => match seeds[id].kind {
                    NodeKind::Uploader => t.to_uploaders += 1,
                    _ => t.to_commenters += 1,
                },
            }
        }
    }
    Ok(out)
}

fn row(out: &mut String, label: &str, n: usize) {
    writeln!(out, "{label}\t{n}").unwrap();
}

/// Per-relation tables in the layout of the like/subscribe/playlist reports.
pub fn behavior_table(t: &BehaviorTallies, relation: Relation) -> String {
    let mut out = String::from("Description of Behaviour\tCount\n");
    row(&mut out, "Number of Seed Uploaders", t.seed_uploaders);
    row(&mut out, "Number of Seed Commenters", t.seed_commenters);
    let up = t.get(relation, NodeKind::Uploader);
    let co = t.get(relation, NodeKind::Commenter);
    match relation {
        Relation::Like => {
            row(&mut out, "Total Videos liked by Uploaders", up.total);
            row(&mut out, " - Likes on Videos by Self", up.self_);
            row(
                &mut out,
                " - Likes on Videos by Other Uploaders",
                up.to_uploaders,
            );
            row(
                &mut out,
                " - Likes on Videos by Commenters",
                up.to_commenters,
            );
            row(&mut out, " - Likes on Videos by Other Users", up.external);
            row(&mut out, "Total Videos liked by Commenters", co.total);
            row(&mut out, " - Likes on Videos by Self", co.self_);
            row(
                &mut out,
                " - Likes on Videos by Other Commenters",
                co.to_commenters,
            );
            row(&mut out, " - Likes on Videos by Uploaders", co.to_uploaders);
            row(&mut out, " - Likes on Videos by Other Users", co.external);
        }
        Relation::Subscribe => {
            row(&mut out, "Total Subscription by Uploaders", up.total);
            row(
                &mut out,
                " - Subscription to Other Uploaders",
                up.to_uploaders,
            );
            row(&mut out, " - Subscription to Commenters", up.to_commenters);
            row(&mut out, " - Subscription to Other Users", up.external);
            row(&mut out, "Total Subscription by Commenters", co.total);
            row(
                &mut out,
                " - Subscription to Other Commenters",
                co.to_commenters,
            );
            row(&mut out, " - Subscription to Uploaders", co.to_uploaders);
            row(&mut out, " - Subscription to Other Users", co.external);
        }
        Relation::Playlist => {
            row(&mut out, "Total Videos in playlist of Uploaders", up.total);
            row(&mut out, " - Self Videos", up.self_);
            row(&mut out, " - Videos of Other Uploaders", up.to_uploaders);
            row(&mut out, " - Videos of Commenters", up.to_commenters);
            row(&mut out, " - Videos of Other Users", up.external);
            row(&mut out, "Total Videos in playlist of Commenters", co.total);
            row(&mut out, " - Self Videos", co.self_);
            row(&mut out, " - Videos of Other Commenters", co.to_commenters);
            row(&mut out, " - Videos of Uploaders", co.to_uploaders);
            row(&mut out, " - Videos of Other Users", co.external);
        }
        Relation::Related | Relation::Comment => {}
    }
    out
}
