//! Box-score game data: ingestion of Rotowire-style JSON documents and the
//! derived statistics that fact checking relies on (half-time scores,
//! leaders, double-doubles, outcomes, period comparisons).
//!
//! See `data/sample_game.json` for the accepted key layout.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate, Weekday};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::teams;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("field `{field}`: {reason}")]
    Field { field: String, reason: String },
    #[error("game failed validation: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("{0} did not play")]
    DidNotPlay(String),
    #[error("no player on the {0} side played")]
    EmptyRoster(Side),
    #[error("game is tied at {0}")]
    Tie(u32),
}

fn field_err(field: impl Into<String>, reason: impl Into<String>) -> GameError {
    GameError::Field { field: field.into(), reason: reason.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Home,
    Visitor,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Home => Side::Visitor,
            Side::Visitor => Side::Home,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Home => "home",
            Side::Visitor => "visitor",
        })
    }
}

impl FromStr for Side {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "home" => Ok(Side::Home),
            "visitor" | "vis" | "away" => Ok(Side::Visitor),
            _ => Err(format!("unknown side `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeamLine {
    pub city: String,
    pub nickname: String,
    pub wins: u32,
    pub losses: u32,
    pub total_points: u32,
    pub quarter_points: [u32; 4],
    /// Points per overtime period, empty for regulation games.
    #[serde(default)]
    pub overtime_points: Vec<u32>,
}

impl TeamLine {
    pub fn full_name(&self) -> String {
        format!("{} {}", self.city, self.nickname)
    }

    /// True when `mention` names this team by city, nickname, full name or
    /// a known alias (case-insensitive).
    pub fn matches(&self, mention: &str) -> bool {
        let m = mention.trim();
        if m.eq_ignore_ascii_case(&self.city)
            || m.eq_ignore_ascii_case(&self.nickname)
            || m.eq_ignore_ascii_case(&self.full_name())
        {
            return true;
        }
        teams::name_forms(&self.nickname).iter().any(|form| {
            m.eq_ignore_ascii_case(form) || m.eq_ignore_ascii_case(&format!("{} {}", self.city, form))
        })
    }

    fn period_points(&self, period: Period) -> u32 {
        let q = &self.quarter_points;
        match period {
            Period::Q1 => q[0],
            Period::Q2 => q[1],
            Period::Q3 => q[2],
            Period::Q4 => q[3],
            Period::H1 => q[0] + q[1],
            Period::H2 => q[2] + q[3],
            Period::Game => self.total_points,
        }
    }
}

/// Made/attempted shooting pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shooting {
    pub made: u32,
    pub attempted: u32,
}

impl Shooting {
    pub fn new(made: u32, attempted: u32) -> Self {
        Self { made, attempted }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerLine {
    pub name: String,
    pub side: Side,
    pub starter: bool,
    /// Whole minutes; seconds are truncated on load.
    pub minutes: u32,
    pub points: u32,
    pub rebounds: u32,
    pub assists: u32,
    pub steals: u32,
    pub blocks: u32,
    pub turnovers: u32,
    pub field_goals: Shooting,
    pub three_pointers: Shooting,
    pub free_throws: Shooting,
    /// False when the box score lists the player without stats ("N/A").
    pub played: bool,
}

impl PlayerLine {
    /// A player line with every counting stat at zero.
    pub fn empty(name: impl Into<String>, side: Side) -> Self {
        Self {
            name: name.into(),
            side,
            starter: false,
            minutes: 0,
            points: 0,
            rebounds: 0,
            assists: 0,
            steals: 0,
            blocks: 0,
            turnovers: 0,
            field_goals: Shooting::default(),
            three_pointers: Shooting::default(),
            free_throws: Shooting::default(),
            played: true,
        }
    }

    pub fn stat(&self, stat: Stat) -> u32 {
        match stat {
            Stat::Points => self.points,
            Stat::Rebounds => self.rebounds,
            Stat::Assists => self.assists,
            Stat::Steals => self.steals,
            Stat::Blocks => self.blocks,
            Stat::Turnovers => self.turnovers,
        }
    }

    pub fn last_name(&self) -> &str {
        self.name.split_whitespace().last().unwrap_or(&self.name)
    }

    fn check(&self, failures: &mut Vec<String>) {
        let pairs = [
            ("FGM <= FGA", self.field_goals.made <= self.field_goals.attempted),
            ("FG3M <= FG3A", self.three_pointers.made <= self.three_pointers.attempted),
            ("FTM <= FTA", self.free_throws.made <= self.free_throws.attempted),
            ("FG3M <= FGM", self.three_pointers.made <= self.field_goals.made),
        ];
        for (rule, ok) in pairs {
            if !ok {
                failures.push(format!("player {}: {rule} violated", self.name));
            }
        }
    }
}

/// Counting stats of a player line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stat {
    Points,
    Rebounds,
    Assists,
    Steals,
    Blocks,
    Turnovers,
}

impl Stat {
    /// The five categories that count towards double-doubles.
    pub const DOUBLE_CATEGORIES: [Stat; 5] =
        [Stat::Points, Stat::Rebounds, Stat::Assists, Stat::Steals, Stat::Blocks];
}

impl fmt::Display for Stat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stat::Points => "points",
            Stat::Rebounds => "rebounds",
            Stat::Assists => "assists",
            Stat::Steals => "steals",
            Stat::Blocks => "blocks",
            Stat::Turnovers => "turnovers",
        })
    }
}

impl FromStr for Stat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "points" | "pts" => Ok(Stat::Points),
            "rebounds" | "reb" => Ok(Stat::Rebounds),
            "assists" | "ast" => Ok(Stat::Assists),
            "steals" | "stl" => Ok(Stat::Steals),
            "blocks" | "blk" => Ok(Stat::Blocks),
            "turnovers" | "to" => Ok(Stat::Turnovers),
            _ => Err(format!("unknown stat `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DoubleStatus {
    None,
    DoubleDouble,
    TripleDouble,
    HigherDouble,
}

impl DoubleStatus {
    /// Status for a given number of categories in double figures.
    pub fn from_count(count: usize) -> Self {
        match count {
            0 | 1 => DoubleStatus::None,
            2 => DoubleStatus::DoubleDouble,
            3 => DoubleStatus::TripleDouble,
            _ => DoubleStatus::HigherDouble,
        }
    }
}

/// Scoring period. `Game` covers regulation plus any overtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Period {
    Q1,
    Q2,
    Q3,
    Q4,
    H1,
    H2,
    Game,
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodResult {
    HomeOutscored,
    VisitorOutscored,
    Tied,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodComparison {
    pub result: PeriodResult,
    pub home: u32,
    pub visitor: u32,
}

impl PeriodComparison {
    /// Side that scored more in the period, `None` for a tie.
    pub fn leader(&self) -> Option<Side> {
        match self.result {
            PeriodResult::HomeOutscored => Some(Side::Home),
            PeriodResult::VisitorOutscored => Some(Side::Visitor),
            PeriodResult::Tied => None,
        }
    }

    pub fn points(&self, side: Side) -> u32 {
        match side {
            Side::Home => self.home,
            Side::Visitor => self.visitor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub winner: Side,
    pub loser: Side,
    pub winner_points: u32,
    pub loser_points: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameData {
    pub game_id: String,
    pub day_of_week: Weekday,
    pub home: TeamLine,
    pub visitor: TeamLine,
    pub players: Vec<PlayerLine>,
}

impl GameData {
    pub fn team(&self, side: Side) -> &TeamLine {
        match side {
            Side::Home => &self.home,
            Side::Visitor => &self.visitor,
        }
    }

    /// Side whose team matches `mention`, if any.
    pub fn side_of_team(&self, mention: &str) -> Option<Side> {
        if self.home.matches(mention) {
            Some(Side::Home)
        } else if self.visitor.matches(mention) {
            Some(Side::Visitor)
        } else {
            None
        }
    }

    pub fn player(&self, name: &str) -> Option<&PlayerLine> {
        self.players.iter().find(|p| p.name.eq_ignore_ascii_case(name))
    }

    pub fn roster(&self, side: Side) -> impl Iterator<Item = &PlayerLine> {
        self.players.iter().filter(move |p| p.side == side)
    }

    /// Lists every violated invariant; empty when the game is consistent.
    pub fn validate(&self) -> Vec<String> {
        let mut failures = Vec::new();
        for (label, team) in [("home", &self.home), ("visitor", &self.visitor)] {
            let sum: u32 = team.quarter_points.iter().sum::<u32>() + team.overtime_points.iter().sum::<u32>();
            if sum != team.total_points {
                failures.push(format!(
                    "{label} team: TEAM-PTS {} != sum of period points {sum}",
                    team.total_points
                ));
            }
        }
        if self.home.total_points == self.visitor.total_points {
            failures.push(format!("game tied at {}", self.home.total_points));
        }
        for p in &self.players {
            p.check(&mut failures);
        }
        failures
    }

    /// First-half points as `(home, visitor)`.
    pub fn halftime_scores(&self) -> (u32, u32) {
        (self.home.period_points(Period::H1), self.visitor.period_points(Period::H1))
    }

    pub fn game_outcome(&self) -> Result<Outcome, GameError> {
        let (h, v) = (self.home.total_points, self.visitor.total_points);
        match h.cmp(&v) {
            std::cmp::Ordering::Equal => Err(GameError::Tie(h)),
            std::cmp::Ordering::Greater => Ok(Outcome {
                winner: Side::Home,
                loser: Side::Visitor,
                winner_points: h,
                loser_points: v,
            }),
            std::cmp::Ordering::Less => Ok(Outcome {
                winner: Side::Visitor,
                loser: Side::Home,
                winner_points: v,
                loser_points: h,
            }),
        }
    }

    pub fn period_comparison(&self, period: Period) -> PeriodComparison {
        let home = self.home.period_points(period);
        let visitor = self.visitor.period_points(period);
        let result = match home.cmp(&visitor) {
            std::cmp::Ordering::Greater => PeriodResult::HomeOutscored,
            std::cmp::Ordering::Less => PeriodResult::VisitorOutscored,
            std::cmp::Ordering::Equal => PeriodResult::Tied,
        };
        PeriodComparison { result, home, visitor }
    }

    /// Every player on `side` attaining the side's maximum of `stat`.
    /// Players who did not play are never considered.
    pub fn team_leaders(&self, side: Side, stat: Stat) -> Result<Vec<&PlayerLine>, GameError> {
        leaders_among(self.roster(side), stat).ok_or(GameError::EmptyRoster(side))
    }
}

/// Players attaining the maximum of `stat` among those who played, or
/// `None` when nobody in `players` played.
pub fn leaders_among<'a>(
    players: impl Iterator<Item = &'a PlayerLine>,
    stat: Stat,
) -> Option<Vec<&'a PlayerLine>> {
    let active: Vec<&PlayerLine> = players.filter(|p| p.played).collect();
    let best = active.iter().map(|p| p.stat(stat)).max()?;
    Some(active.into_iter().filter(|p| p.stat(stat) == best).collect())
}

/// Classifies a player's line by how many of points, rebounds, assists,
/// steals and blocks reached ten.
pub fn double_double_status(player: &PlayerLine) -> Result<DoubleStatus, GameError> {
    if !player.played {
        return Err(GameError::DidNotPlay(player.name.clone()));
    }
    let count = Stat::DOUBLE_CATEGORIES.iter().filter(|&&s| player.stat(s) >= 10).count();
    Ok(DoubleStatus::from_count(count))
}

/// Parses a weekday name (full or three-letter) or a date in the Rotowire
/// `MM_DD_YY` layout or ISO `YYYY-MM-DD`.
pub fn parse_day(raw: &str) -> Option<Weekday> {
    let s = raw.trim();
    if let Ok(w) = s.parse::<Weekday>() {
        return Some(w);
    }
    if let Ok(d) = NaiveDate::parse_from_str(s, "%m_%d_%y") {
        return Some(d.weekday());
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d").ok().map(|d| d.weekday())
}

pub fn weekday_name(day: Weekday) -> &'static str {
    match day {
        Weekday::Mon => "Monday",
        Weekday::Tue => "Tuesday",
        Weekday::Wed => "Wednesday",
        Weekday::Thu => "Thursday",
        Weekday::Fri => "Friday",
        Weekday::Sat => "Saturday",
        Weekday::Sun => "Sunday",
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.trim().to_string()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn is_absent(v: Option<&Value>) -> bool {
    match v {
        None | Some(Value::Null) => true,
        Some(v) => scalar_text(v).is_some_and(|s| s.is_empty() || s.eq_ignore_ascii_case("N/A")),
    }
}

fn parse_count(v: &Value, field: &str) -> Result<u32, GameError> {
    let text = scalar_text(v).ok_or_else(|| field_err(field, "expected a number or numeric string"))?;
    text.parse::<u32>()
        .map_err(|_| field_err(field, format!("`{text}` is not a non-negative integer")))
}

fn team_count(line: &Map<String, Value>, prefix: &str, key: &str) -> Result<u32, GameError> {
    let field = format!("{prefix}.{key}");
    let v = line.get(key).ok_or_else(|| field_err(&field, "missing"))?;
    parse_count(v, &field)
}

fn team_text(line: &Map<String, Value>, prefix: &str, key: &str) -> Result<String, GameError> {
    let field = format!("{prefix}.{key}");
    line.get(key)
        .and_then(scalar_text)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| field_err(field, "missing or not text"))
}

fn parse_team(doc: &Map<String, Value>, key: &str) -> Result<TeamLine, GameError> {
    let line = doc
        .get(key)
        .and_then(Value::as_object)
        .ok_or_else(|| field_err(key, "missing or not an object"))?;
    let mut quarters = [0u32; 4];
    for (i, q) in quarters.iter_mut().enumerate() {
        *q = team_count(line, key, &format!("TEAM-PTS_QTR{}", i + 1))?;
    }
    let overtime_points = match line.get("TEAM-PTS_OT") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, v)| parse_count(v, &format!("{key}.TEAM-PTS_OT[{i}]")))
            .collect::<Result<_, _>>()?,
        Some(other) => vec![parse_count(other, &format!("{key}.TEAM-PTS_OT"))?],
    };
    Ok(TeamLine {
        city: team_text(line, key, "TEAM-CITY")?,
        nickname: team_text(line, key, "TEAM-NAME")?,
        wins: team_count(line, key, "TEAM-WINS")?,
        losses: team_count(line, key, "TEAM-LOSSES")?,
        total_points: team_count(line, key, "TEAM-PTS")?,
        quarter_points: quarters,
        overtime_points,
    })
}

/// Box-score columns, keyed by stat name then by player row id.
struct BoxScore<'a> {
    columns: &'a Map<String, Value>,
}

impl<'a> BoxScore<'a> {
    fn cell(&self, column: &str, row: &str) -> Option<&'a Value> {
        self.columns.get(column)?.as_object()?.get(row)
    }

    fn text(&self, column: &str, row: &str) -> Option<String> {
        self.cell(column, row).and_then(scalar_text)
    }

    fn count(&self, column: &str, row: &str) -> Result<u32, GameError> {
        let field = format!("box_score.{column}.{row}");
        let v = self.cell(column, row).ok_or_else(|| field_err(&field, "missing"))?;
        if is_absent(Some(v)) {
            return Ok(0);
        }
        parse_count(v, &field)
    }
}

fn parse_minutes(raw: Option<String>, field: &str) -> Result<u32, GameError> {
    let Some(raw) = raw else { return Ok(0) };
    if raw.is_empty() || raw.eq_ignore_ascii_case("N/A") {
        return Ok(0);
    }
    let whole = raw.split(':').next().unwrap_or("");
    let whole = whole.split('.').next().unwrap_or("");
    whole.parse().map_err(|_| field_err(field, format!("`{raw}` is not a minute count")))
}

fn player_side(
    boxes: &BoxScore<'_>,
    row: &str,
    home: &TeamLine,
    visitor: &TeamLine,
) -> Result<Side, GameError> {
    if let Some(side) = boxes.text("TEAM_SIDE", row) {
        return side.parse().map_err(|e: String| field_err(format!("box_score.TEAM_SIDE.{row}"), e));
    }
    if let Some(name) = boxes.text("TEAM_NAME", row) {
        if home.matches(&name) {
            return Ok(Side::Home);
        }
        if visitor.matches(&name) {
            return Ok(Side::Visitor);
        }
    }
    let field = format!("box_score.TEAM_CITY.{row}");
    let city = boxes.text("TEAM_CITY", row).ok_or_else(|| field_err(&field, "missing"))?;
    let home_hit = city.eq_ignore_ascii_case(&home.city);
    let vis_hit = city.eq_ignore_ascii_case(&visitor.city);
    match (home_hit, vis_hit) {
        (true, false) => Ok(Side::Home),
        (false, true) => Ok(Side::Visitor),
        (true, true) => Err(field_err(field, "both teams share this city; add TEAM_NAME or TEAM_SIDE")),
        (false, false) => Err(field_err(field, format!("`{city}` matches neither team"))),
    }
}

fn parse_players(
    doc: &Map<String, Value>,
    home: &TeamLine,
    visitor: &TeamLine,
) -> Result<Vec<PlayerLine>, GameError> {
    let columns = doc
        .get("box_score")
        .and_then(Value::as_object)
        .ok_or_else(|| field_err("box_score", "missing or not an object"))?;
    let boxes = BoxScore { columns };
    let names = columns
        .get("PLAYER_NAME")
        .and_then(Value::as_object)
        .ok_or_else(|| field_err("box_score.PLAYER_NAME", "missing or not an object"))?;
    let mut rows: Vec<&String> = names.keys().collect();
    rows.sort_by_key(|r| (r.parse::<u64>().unwrap_or(u64::MAX), r.as_str()));

    let mut players = Vec::with_capacity(rows.len());
    for row in rows {
        let name = boxes
            .text("PLAYER_NAME", row)
            .filter(|n| !n.is_empty())
            .ok_or_else(|| field_err(format!("box_score.PLAYER_NAME.{row}"), "missing or empty"))?;
        let side = player_side(&boxes, row, home, visitor)?;
        let played = !is_absent(boxes.cell("PTS", row));
        let starter = boxes
            .text("START_POSITION", row)
            .is_some_and(|s| !s.is_empty() && !s.eq_ignore_ascii_case("N/A"));
        let mut line = PlayerLine::empty(name, side);
        line.starter = starter;
        line.played = played;
        if played {
            line.minutes = parse_minutes(boxes.text("MIN", row), &format!("box_score.MIN.{row}"))?;
            line.points = boxes.count("PTS", row)?;
            line.rebounds = boxes.count("REB", row)?;
            line.assists = boxes.count("AST", row)?;
            line.steals = boxes.count("STL", row)?;
            line.blocks = boxes.count("BLK", row)?;
            line.turnovers = boxes.count("TO", row)?;
            line.field_goals = Shooting::new(boxes.count("FGM", row)?, boxes.count("FGA", row)?);
            line.three_pointers = Shooting::new(boxes.count("FG3M", row)?, boxes.count("FG3A", row)?);
            line.free_throws = Shooting::new(boxes.count("FTM", row)?, boxes.count("FTA", row)?);
        }
        players.push(line);
    }
    Ok(players)
}

/// Parses one box-score document and validates its invariants.
///
/// `default_id` is used when the document carries no `game_id` key
/// (typically the file stem).
pub fn load_game(document: &str, default_id: &str) -> Result<GameData, GameError> {
    let value: Value = serde_json::from_str(document)?;
    let game = parse_game_value(&value, default_id)?;
    let failures = game.validate();
    if failures.is_empty() {
        Ok(game)
    } else {
        Err(GameError::Validation(failures))
    }
}

/// Like [`load_game`] but returns the parsed game without enforcing the
/// invariants, so callers can report every failure.
pub fn parse_game_value(value: &Value, default_id: &str) -> Result<GameData, GameError> {
    let doc = value.as_object().ok_or_else(|| field_err("<root>", "expected an object"))?;
    let home = parse_team(doc, "home_line")?;
    let visitor = parse_team(doc, "vis_line")?;
    let day_raw = doc
        .get("day_of_week")
        .or_else(|| doc.get("day"))
        .and_then(scalar_text)
        .ok_or_else(|| field_err("day", "missing"))?;
    let day_of_week =
        parse_day(&day_raw).ok_or_else(|| field_err("day", format!("`{day_raw}` is not a weekday or MM_DD_YY date")))?;
    let game_id = doc
        .get("game_id")
        .and_then(scalar_text)
        .unwrap_or_else(|| default_id.to_string());
    let players = parse_players(doc, &home, &visitor)?;
    Ok(GameData { game_id, day_of_week, home, visitor, players })
}

pub fn load_game_file(path: &Path) -> Result<GameData, GameError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| GameError::Io { path: path.display().to_string(), source })?;
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    load_game(&text, &stem)
}

/// Games keyed by id, with the lookup from summary to game.
#[derive(Debug, Clone, Default)]
pub struct GameSet {
    games: BTreeMap<String, GameData>,
    /// Explicit doc id to game id assignments; win over the naming rule.
    map: BTreeMap<String, String>,
}

impl GameSet {
    pub fn new(games: impl IntoIterator<Item = GameData>) -> Self {
        Self { games: games.into_iter().map(|g| (g.game_id.clone(), g)).collect(), map: BTreeMap::new() }
    }

    /// Loads every `*.json` file in `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self, GameError> {
        let io = |source| GameError::Io { path: dir.display().to_string(), source };
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        let games = paths.iter().map(|p| load_game_file(p)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(games))
    }

    pub fn with_map(mut self, map: BTreeMap<String, String>) -> Self {
        self.map = map;
        self
    }

    pub fn len(&self) -> usize {
        self.games.len()
    }

    pub fn is_empty(&self) -> bool {
        self.games.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GameData> {
        self.games.values()
    }

    pub fn get(&self, game_id: &str) -> Option<&GameData> {
        self.games.get(game_id)
    }

    /// The game a summary describes: an explicit assignment, else a game
    /// whose id equals the doc id, else the doc id minus its `<System>_`
    /// prefix.
    pub fn for_doc(&self, doc_id: &str) -> Option<&GameData> {
        if let Some(id) = self.map.get(doc_id) {
            return self.games.get(id);
        }
        self.games
            .get(doc_id)
            .or_else(|| doc_id.split_once('_').and_then(|(_, rest)| self.games.get(rest)))
    }
}

fn team_json(team: &TeamLine) -> Value {
    let mut m = Map::new();
    m.insert("TEAM-CITY".into(), team.city.clone().into());
    m.insert("TEAM-NAME".into(), team.nickname.clone().into());
    m.insert("TEAM-WINS".into(), team.wins.to_string().into());
    m.insert("TEAM-LOSSES".into(), team.losses.to_string().into());
    m.insert("TEAM-PTS".into(), team.total_points.to_string().into());
    for (i, q) in team.quarter_points.iter().enumerate() {
        m.insert(format!("TEAM-PTS_QTR{}", i + 1), q.to_string().into());
    }
    if !team.overtime_points.is_empty() {
        m.insert(
            "TEAM-PTS_OT".into(),
            Value::Array(team.overtime_points.iter().map(|p| p.to_string().into()).collect()),
        );
    }
    Value::Object(m)
}

/// Renders a game back into the accepted JSON layout.
pub fn to_document(game: &GameData) -> Value {
    let mut columns: Map<String, Value> = Map::new();
    let mut put = |column: &str, row: usize, v: Value| {
        columns
            .entry(column.to_string())
            .or_insert_with(|| Value::Object(Map::new()))
            .as_object_mut()
            .expect("column is an object")
            .insert(row.to_string(), v);
    };
    for (row, p) in game.players.iter().enumerate() {
        put("PLAYER_NAME", row, p.name.clone().into());
        put("TEAM_CITY", row, game.team(p.side).city.clone().into());
        put("TEAM_NAME", row, game.team(p.side).nickname.clone().into());
        put("START_POSITION", row, if p.starter { "F" } else { "N/A" }.into());
        let stat = |v: u32| -> Value { if p.played { v.to_string().into() } else { "N/A".into() } };
        put("MIN", row, stat(p.minutes));
        put("PTS", row, stat(p.points));
        put("REB", row, stat(p.rebounds));
        put("AST", row, stat(p.assists));
        put("STL", row, stat(p.steals));
        put("BLK", row, stat(p.blocks));
        put("TO", row, stat(p.turnovers));
        put("FGM", row, stat(p.field_goals.made));
        put("FGA", row, stat(p.field_goals.attempted));
        put("FG3M", row, stat(p.three_pointers.made));
        put("FG3A", row, stat(p.three_pointers.attempted));
        put("FTM", row, stat(p.free_throws.made));
        put("FTA", row, stat(p.free_throws.attempted));
    }
    serde_json::json!({
        "game_id": game.game_id,
        "day": weekday_name(game.day_of_week),
        "home_line": team_json(&game.home),
        "vis_line": team_json(&game.visitor),
        "box_score": columns,
    })
}
