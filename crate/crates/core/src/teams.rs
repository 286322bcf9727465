//! Static NBA franchise table used to recognise team mentions in prose,
//! including teams that did not play in the game being checked.

/// One franchise: city, nickname, and the alternative surface forms that
/// summaries use for it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Franchise {
    pub city: &'static str,
    pub nickname: &'static str,
    pub aliases: &'static [&'static str],
}

pub const FRANCHISES: &[Franchise] = &[
    Franchise { city: "Atlanta", nickname: "Hawks", aliases: &["Hawk"] },
    Franchise { city: "Boston", nickname: "Celtics", aliases: &["Celtic", "C's"] },
    Franchise { city: "Brooklyn", nickname: "Nets", aliases: &["Net"] },
    Franchise { city: "Charlotte", nickname: "Hornets", aliases: &["Hornet", "Bobcats", "Bobcat"] },
    Franchise { city: "Chicago", nickname: "Bulls", aliases: &["Bull"] },
    Franchise { city: "Cleveland", nickname: "Cavaliers", aliases: &["Cavalier", "Cavs", "Cav"] },
    Franchise { city: "Dallas", nickname: "Mavericks", aliases: &["Maverick", "Mavs", "Mav"] },
    Franchise { city: "Denver", nickname: "Nuggets", aliases: &["Nugget"] },
    Franchise { city: "Detroit", nickname: "Pistons", aliases: &["Piston"] },
    Franchise { city: "Golden State", nickname: "Warriors", aliases: &["Warrior", "Dubs"] },
    Franchise { city: "Houston", nickname: "Rockets", aliases: &["Rocket"] },
    Franchise { city: "Indiana", nickname: "Pacers", aliases: &["Pacer"] },
    Franchise { city: "LA", nickname: "Clippers", aliases: &["Clipper", "Clips"] },
    Franchise { city: "Los Angeles", nickname: "Lakers", aliases: &["Laker"] },
    Franchise { city: "Memphis", nickname: "Grizzlies", aliases: &["Grizzly", "Grizz"] },
    Franchise { city: "Miami", nickname: "Heat", aliases: &[] },
    Franchise { city: "Milwaukee", nickname: "Bucks", aliases: &["Buck"] },
    Franchise { city: "Minnesota", nickname: "Timberwolves", aliases: &["Timberwolf", "Wolves", "T'wolves"] },
    Franchise { city: "New Orleans", nickname: "Pelicans", aliases: &["Pelican", "Pels"] },
    Franchise { city: "New York", nickname: "Knicks", aliases: &["Knick"] },
    Franchise { city: "Oklahoma City", nickname: "Thunder", aliases: &["OKC"] },
    Franchise { city: "Orlando", nickname: "Magic", aliases: &[] },
    Franchise { city: "Philadelphia", nickname: "76ers", aliases: &["76er", "Sixers", "Sixer"] },
    Franchise { city: "Phoenix", nickname: "Suns", aliases: &["Sun"] },
    Franchise { city: "Portland", nickname: "Trail Blazers", aliases: &["Trail Blazer", "Blazers", "Blazer"] },
    Franchise { city: "Sacramento", nickname: "Kings", aliases: &["King"] },
    Franchise { city: "San Antonio", nickname: "Spurs", aliases: &["Spur"] },
    Franchise { city: "Toronto", nickname: "Raptors", aliases: &["Raptor"] },
    Franchise { city: "Utah", nickname: "Jazz", aliases: &[] },
    Franchise { city: "Washington", nickname: "Wizards", aliases: &["Wizard"] },
];

/// Looks up the franchise whose nickname (or alias) matches `name`,
/// case-insensitively.
pub fn by_nickname(name: &str) -> Option<&'static Franchise> {
    FRANCHISES.iter().find(|f| {
        f.nickname.eq_ignore_ascii_case(name) || f.aliases.iter().any(|a| a.eq_ignore_ascii_case(name))
    })
}

/// All surface forms (nickname, aliases) that identify a franchise by name.
pub fn name_forms(nickname: &str) -> Vec<String> {
    let mut forms = vec![nickname.to_string()];
    if let Some(f) = by_nickname(nickname) {
        forms.push(f.nickname.to_string());
        forms.extend(f.aliases.iter().map(|a| a.to_string()));
    }
    forms.sort();
    forms.dedup();
    forms
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alias_resolves_to_franchise() {
        assert_eq!(by_nickname("sixers").unwrap().nickname, "76ers");
        assert_eq!(by_nickname("Raptor").unwrap().city, "Toronto");
        assert!(by_nickname("Monday").is_none());
    }

    #[test]
    fn thirty_franchises() {
        assert_eq!(FRANCHISES.len(), 30);
    }
}
