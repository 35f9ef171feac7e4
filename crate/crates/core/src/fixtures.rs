//! Deterministic generator for the shipped mock corpus.
//!
//! Every seeded event carries a planned outcome: a hit with a given first
//! channel, a paired X/news latency, or one of several kinds of miss. Documents
//! are built from the queries the fallback drafter actually produces, so the
//! corpus stays consistent with the drafting code. [`check`] runs the mock
//! pipeline over the written files and reports every event whose outcome
//! differs from its plan.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use chrono::{Datelike, NaiveDate, NaiveDateTime};
use percent_encoding::{utf8_percent_encode, AsciiSet, CONTROLS};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::drafting::ladder::broaden_ladder;
use crate::drafting::{draft_event, BooleanQuery, FallbackBackend, DEFAULT_SPECIFICITY_THRESHOLD};
use crate::error::{Error, Result};
use crate::model::{Category, Channel, Event, TimeWindow, Timestamp, MS_PER_HOUR, MS_PER_MINUTE};
use crate::pipeline::{Pipeline, Services};
use crate::polymarket::{self, MarketRecord, Trade};
use crate::provider::mock::FixtureDoc;
use crate::verify::KeywordSet;
use crate::wcep::{self, FixturePageviews, PageviewRecord, UsLexicon, WcepPages, WcepParams};
use crate::xrecover::SnowflakeId;

pub const SEED: u64 = 20_260_412;
pub const RUN_ID: &str = "mock";

const A_FROM: &str = "2026-04-12";
const A_TO: &str = "2026-05-11";
const B_FROM: &str = "2026-02-13";
const B_TO: &str = "2026-05-13";

/// What the verifier should conclude for one event.
#[derive(Debug, Clone, PartialEq)]
pub enum Plan {
    Hit { winner: Channel },
    /// Verified on both X and news; `delta_ms` is news minus X.
    Paired { delta_ms: i64 },
    Miss(MissKind),
    /// A miss whose broadening ladder only finds matches at the last level.
    Probe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MissKind {
    /// Nothing matches the query.
    Silent,
    /// Matches only through text the index saw but the mention does not carry.
    Polluted,
    /// Matching tweets whose bodies cannot be recovered.
    Unverifiable,
}

pub struct Corpus {
    /// File name under `wcep/` → month page HTML.
    pub pages: BTreeMap<String, String>,
    pub pageviews: Vec<PageviewRecord>,
    pub markets: Vec<MarketRecord>,
    pub trades: Vec<Trade>,
    pub docs: Vec<FixtureDoc>,
    /// Tweet id → oEmbed file body. An empty body is an empty payload.
    pub oembed: BTreeMap<u64, String>,
    pub run_toml: String,
    pub plans: BTreeMap<String, Plan>,
    pub probe_event: String,
    pub probe_guid: String,
}

// ---- Sample A -------------------------------------------------------------

// (date, heading, topic, text, pageviews, plan). Text uses [[Article|shown]]
// links; a non-empty topic nests the bullet under a topic link instead.
// Plans: H hit, D<delta> paired, M/MP/MU silent/polluted/unverifiable miss,
// PROBE, and "" for bullets the ranking must leave out.
const A_EVENTS: &[(&str, &str, &str, &str, u64, &str)] = &[
    ("04-23", "Sports", "", "The [[2026 NFL draft]] opens at Acrisure Stadium in Pittsburgh, with the Las Vegas Raiders selecting quarterback Fernando Mendoza first overall.", 436_044, "D-33.4"),
    ("04-20", "Sports", "", "Kenyan runners John Korir and Sharon Lokedi win the [[2026 Boston Marathon]] in Massachusetts.", 88_213, "H"),
    ("04-18", "Sports", "", "The [[2026 NBA playoffs]] begin as the Oklahoma City Thunder host the Memphis Grizzlies.", 120_560, "H"),
    ("05-04", "Sports", "", "The Denver Nuggets eliminate the Los Angeles Lakers in the first round of the [[2026 NBA playoffs]].", 97_342, "H"),
    ("05-02", "Sports", "", "Sovereignty wins the 152nd [[2026 Kentucky Derby|Kentucky Derby]] at Churchill Downs in Louisville.", 143_877, "H"),
    ("04-12", "Armed conflicts and attacks", "2026 Iran–United States conflict", "The Pentagon confirms American airstrikes on Revolutionary Guard bases near Bandar Abbas.", 298_441, "H"),
    ("04-19", "Armed conflicts and attacks", "2026 Iran–United States conflict", "Iran launches ballistic missiles at the United States Fifth Fleet headquarters in Manama, Bahrain.", 251_007, "H"),
    ("04-27", "Armed conflicts and attacks", "2026 Iran–United States conflict", "Oman announces that Iranian and American negotiators will meet in Muscat for ceasefire talks.", 233_118, "H"),
    ("05-03", "Armed conflicts and attacks", "2026 Iran–United States conflict", "United States Central Command reports intercepting Iranian drones over the Strait of Hormuz.", 190_220, ""),
    ("05-09", "Armed conflicts and attacks", "2026 Iran–United States conflict", "Iran's parliament votes to suspend cooperation with the International Atomic Energy Agency after American strikes.", 185_000, ""),
    ("04-14", "Politics and elections", "Second Trump administration", "President Donald Trump signs an executive order dissolving the Department of Education.", 276_300, "H"),
    ("04-29", "Politics and elections", "Second Trump administration", "Trump marks the first hundred days of his second term with a rally in Warren, Michigan.", 210_455, "H"),
    ("05-06", "Politics and elections", "Second Trump administration", "The White House announces that Trump will visit Saudi Arabia, Qatar and the United Arab Emirates.", 164_912, "MP"),
    ("04-30", "Politics and elections", "", "Prime Minister Gaston Browne's Labour Party wins the [[2026 Antiguan general election]]; United States observers describe the vote as orderly.", 17_430, "D-7.1"),
    ("04-22", "Politics and elections", "", "The Ohio Redistricting Commission adopts a new congressional map, renewing debate over [[Gerrymandering in the United States|gerrymandering]].", 4_617, "D-10.0"),
    ("04-16", "Law and crime", "Death of Rivas Hernandez", "Salvadoran national Rivas Hernandez dies in ICE custody at a detention center in Houston, Texas.", 150_383, "D-32.0"),
    ("04-15", "Armed conflicts and attacks", "2026 Markazi High School strike", "A drone strike hits Markazi High School in Bajaur, Pakistan, killing 14 students; the United States condemns the attack.", 31_540, "PROBE"),
    ("04-13", "Armed conflicts and attacks", "Russo-Ukrainian war (2022–present)", "Russian missiles strike Sumy, killing 34 civilians; American envoy Keith Kellogg calls the attack a crossed line.", 70_821, "H"),
    ("05-08", "Armed conflicts and attacks", "Russo-Ukrainian war (2022–present)", "Ukraine and the United States sign a minerals agreement in Washington.", 55_230, "M"),
    ("04-21", "Politics and elections", "", "James Talarico wins the Democratic runoff in the [[2026 United States Senate election in Texas]].", 41_022, "H"),
    ("05-05", "Law and crime", "", "The Supreme Court of the United States hears oral arguments in [[Trump v. Illinois]] on National Guard deployments to Chicago.", 38_765, "H"),
    ("04-17", "Armed conflicts and attacks", "2026 Venezuela crisis", "United States Navy forces seize a Venezuelan tanker off Aruba.", 98_230, "H"),
    ("04-25", "Armed conflicts and attacks", "2026 Venezuela crisis", "Nicolás Maduro addresses the nation after American drones strike a port in Puerto Cabello.", 76_021, "H"),
    ("05-10", "Armed conflicts and attacks", "2026 Venezuela crisis", "Opposition leader María Corina Machado meets Secretary of State Marco Rubio in Washington.", 60_102, "M"),
    ("04-24", "International relations", "", "Hamas and Israel exchange hostages and prisoners under the United States-brokered [[Gaza war ceasefire]].", 52_314, "H"),
    ("04-26", "Law and crime", "2026 Minneapolis ICE shooting", "A federal immigration agent shoots a man during a raid in Minneapolis, prompting protests.", 47_780, "H"),
    ("05-01", "Politics and elections", "", "Congress passes a stopgap bill ending the [[2026 United States federal government shutdown]] after 18 days.", 45_601, "H"),
    ("04-28", "International relations", "", "NATO leaders meet in Ankara for the [[2026 NATO summit]], where American officials press allies on defence spending.", 36_702, "H"),
    ("05-07", "International relations", "2026 Cuban power grid collapse", "Cuba's national grid collapses for a third time; the United States embassy in Havana suspends services.", 28_330, "MU"),
    ("04-20", "Law and crime", "", "The Department of Justice releases a further batch of the [[Epstein files]] to the House Oversight Committee.", 88_001, "H"),
    ("05-02", "Law and crime", "", "Ghislaine Maxwell is moved to a federal prison camp in Bryan, Texas, as the [[Epstein files]] dispute continues.", 54_002, "H"),
    ("04-19", "Politics and elections", "", "Candidates in the [[2026 Colombian presidential election]] debate in Bogotá; American observers note rising violence.", 26_410, "M"),
    ("05-03", "Armed conflicts and attacks", "Gang war in Haiti", "Gangs seize the town of Mirebalais; the United States approves funding for the Gang Suppression Force.", 21_560, "MP"),
    ("04-18", "Law and crime", "", "A federal appeals court in Philadelphia hears the deportation case of Columbia activist [[Mahmoud Khalil]].", 24_733, "H"),
    ("05-09", "Law and crime", "2026 Portland National Guard deployment", "A federal judge blocks the deployment of National Guard troops to Portland, Oregon.", 19_804, "H"),
    ("04-13", "Law and crime", "", "[[Kilmar Abrego Garcia]] is returned to the United States to face smuggling charges in Tennessee.", 33_409, "H"),
    ("04-29", "Business and economy", "", "The [[Federal Open Market Committee|Federal Reserve]] holds interest rates steady, citing tariff uncertainty.", 64_410, "H"),
    ("04-12", "Science and technology", "", "[[Artemis II]] splashes down in the Pacific Ocean off San Diego, ending NASA's first crewed lunar flyby since 1972.", 187_330, "H"),
    ("04-16", "Science and technology", "", "NASA releases the first high-resolution images of the lunar far side taken by the [[Artemis II]] crew.", 90_010, "H"),
    ("05-06", "Business and economy", "", "[[Nvidia]] reports record quarterly revenue of 51 billion dollars; shares rise on Wall Street.", 43_120, "M"),
    ("04-22", "Business and economy", "", "[[Tesla, Inc.|Tesla]] expands its robotaxi service to Austin and Phoenix.", 39_870, "H"),
    ("04-14", "Business and economy", "", "[[Bitcoin]] falls below 70,000 dollars after the United States announces new crypto reporting rules.", 35_005, "MP"),
    ("04-15", "Business and economy", "", "The United States raises [[Tariffs in the second Trump administration|tariffs]] on Chinese goods to 145 percent.", 80_330, "H"),
    ("05-11", "Business and economy", "", "China and the United States agree in Geneva to cut [[Tariffs in the second Trump administration|tariffs]] for 90 days.", 58_880, "H"),
    ("04-27", "Science and technology", "", "SpaceX launches [[SpaceX Starship flight 12|Starship flight 12]] from Starbase, Texas.", 29_950, "MU"),
    ("05-05", "Science and technology", "", "[[OpenAI]] opens its Stargate data center campus in Abilene, Texas.", 27_740, "M"),
    ("04-27", "Arts and culture", "", "English singer [[Billy Idol]] receives a star on the Hollywood Walk of Fame in Los Angeles.", 46_326, "D-53.7"),
    ("05-01", "Disasters and accidents", "", "Texas lawmakers publish the final investigative report on the [[July 2025 Central Texas floods]].", 9_018, "D-11.2"),
    ("04-18", "Arts and culture", "", "Lady Gaga headlines the second weekend of [[Coachella 2026|Coachella]] in Indio, California.", 30_250, "H"),
    ("05-01", "Health and environment", "", "The CDC reports 1,200 cases in the [[2026 United States measles outbreak]], the most since 1992.", 25_620, "M"),
    ("04-28", "Disasters and accidents", "Tornado outbreak of April 27–28, 2026", "A tornado outbreak kills 23 people across Mississippi and Alabama.", 22_210, "H"),
    ("05-04", "Arts and culture", "", "The [[2026 Met Gala]] is held at the Metropolitan Museum of Art in New York City.", 20_030, "H"),
];

const HEADINGS: &[&str] = &[
    "Armed conflicts and attacks",
    "Arts and culture",
    "Business and economy",
    "Disasters and accidents",
    "Health and environment",
    "International relations",
    "Law and crime",
    "Politics and elections",
    "Science and technology",
    "Sports",
];

const US_PLACES: &[&str] = &[
    "Ohio", "Texas", "California", "Florida", "Nevada", "Arizona", "Oregon", "Iowa", "Kansas", "Utah",
    "Vermont", "Idaho", "Montana", "Alaska", "Hawaii", "Colorado", "Michigan", "Wisconsin", "Missouri",
    "Nebraska", "Tennessee", "Louisiana", "Alabama", "Kentucky", "New Mexico",
];

const ABROAD: &[&str] = &[
    "Bangladesh", "Kenya", "Nigeria", "Indonesia", "Brazil", "Peru", "Chile", "Vietnam", "Thailand", "Egypt",
    "Morocco", "Ghana", "Nepal", "Sri Lanka", "Mongolia", "Norway", "Finland", "Poland", "Romania", "Greece",
    "Portugal", "Malaysia", "the Philippines", "Ethiopia", "Tanzania", "Uganda", "Senegal", "Bolivia",
    "Ecuador", "Uruguay", "Iceland", "Estonia", "Latvia", "Lithuania", "Croatia", "Serbia", "Slovakia",
    "Bhutan", "Cambodia", "Fiji", "Zambia", "Malawi", "Namibia", "Paraguay",
];

const NOUNS: &[&str] = &[
    "floods", "wildfire", "earthquake", "local elections", "referendum", "rail strike", "protests",
    "bridge collapse", "train derailment", "heatwave", "drought", "cabinet reshuffle", "budget dispute",
    "arts festival", "mine accident", "ferry accident", "landslide", "storm", "power outage", "court ruling",
];

const OUTCOMES: &[&str] = &[
    "displaces thousands of residents",
    "prompts a state of emergency",
    "draws large crowds to the capital",
    "leaves at least twelve people dead",
    "is postponed by officials",
    "closes schools for a week",
    "disrupts transport across the region",
    "leads to the resignation of two ministers",
    "is condemned by opposition leaders",
    "damages hundreds of homes",
];

// ---- Sample B -------------------------------------------------------------

// (event title, question, category metadata, group, spike time MM-DDTHH:MM, plan).
const B_EVENTS: &[(&str, &str, &str, &str, &str, &str)] = &[
    ("Iran/US conflict ends?", "Will the Iran–United States conflict end by April 30?", "politics", "iran-us-2026", "04-07T23:40", "D-34.23"),
    ("UFC Strickland v Hernandez", "Will Sean Strickland defeat Anthony Hernandez at UFC Fight Night?", "sports", "", "02-22T04:12", "D-0.62"),
    ("Axiom insider trading?", "Will the SEC charge Axiom Space executives with insider trading by March 31?", "other", "", "03-05T15:20", "D-0.50"),
    ("Mavericks v Lakers", "Will the Dallas Mavericks beat the Los Angeles Lakers on March 17?", "sports", "", "03-18T04:31", "D-0.26"),
    ("Hungary election (Jobbik)", "Will Jobbik win seats in the Hungarian parliamentary election?", "politics", "hungary-2026", "04-12T19:05", "D-0.20"),
    ("Nuggets v Thunder", "Will the Denver Nuggets beat the Oklahoma City Thunder on March 9?", "", "", "03-10T03:48", "D-0.10"),
    ("Real Madrid 2026-02-25", "Will Real Madrid win on 2026-02-25?", "sports", "rma-ben-2026-02-25", "02-25T21:52", "D-0.06"),
    ("FC Barcelona 2026-03-18", "Will FC Barcelona win on 2026-03-18?", "sports", "fcb-new-2026-03-18", "03-18T21:49", "D-0.02"),
    ("Aston Villa 2026-02-27", "Will Aston Villa win on 2026-02-27?", "sports", "avl-che-2026-02-27", "02-27T21:55", "D-0.02"),
    ("Spurs v Pistons", "Will the San Antonio Spurs beat the Detroit Pistons on April 2?", "sports", "", "04-03T02:37", "D-0.02"),
    ("Thunder v Pistons", "Will the Oklahoma City Thunder beat the Detroit Pistons on March 25?", "sports", "", "03-26T02:44", "D1.20"),
    ("UCLA v UConn", "Will UCLA beat UConn in the NCAA women's tournament semifinal?", "sports", "", "04-04T01:30", "D1.26"),
    ("Olympique Lyonnais 2026-02-15", "Will Olympique Lyonnais win on 2026-02-15?", "sports", "oly-mar-2026-02-15", "02-15T21:50", "D2.50"),
    ("Schauffele wins 2026 Masters", "Will Xander Schauffele win the 2026 Masters Tournament?", "sports", "masters-2026", "04-12T22:41", "D14.19"),
    ("LoL G2 v Bilibili", "Will G2 Esports beat Bilibili Gaming at League of Legends First Stand?", "sports", "lol-first-stand-2026", "03-14T11:20", "D143.80"),
    ("Atlético Madrid 2026-02-14", "Will Atlético Madrid win on 2026-02-14?", "sports", "atm-ray-2026-02-14", "02-14T19:58", "D552.17"),
    ("Celtics v Knicks", "Will the Boston Celtics beat the New York Knicks on February 19?", "", "", "02-20T02:40", "H"),
    ("Warriors v Rockets", "Will the Golden State Warriors beat the Houston Rockets on February 23?", "sports", "", "02-24T05:10", "M"),
    ("Cavaliers v Bucks", "Will the Cleveland Cavaliers beat the Milwaukee Bucks on February 26?", "sports", "", "02-27T02:30", "H"),
    ("Lakers v Clippers", "Will the Los Angeles Lakers beat the LA Clippers on February 28?", "sports", "", "03-01T05:20", "M"),
    ("Knicks v 76ers", "Will the New York Knicks beat the Philadelphia 76ers on March 3?", "sports", "", "03-04T02:35", "H"),
    ("Timberwolves v Nuggets", "Will the Minnesota Timberwolves beat the Denver Nuggets on March 11?", "sports", "", "03-12T03:10", "M"),
    ("Heat v Magic", "Will the Miami Heat beat the Orlando Magic on March 19?", "sports", "", "03-20T01:50", "H"),
    ("Suns v Kings", "Will the Phoenix Suns beat the Sacramento Kings on March 27?", "sports", "", "03-28T04:40", "M"),
    ("Rockets v Grizzlies", "Will the Houston Rockets beat the Memphis Grizzlies on April 4?", "sports", "", "04-05T01:40", "H"),
    ("Bucks v Pacers", "Will the Milwaukee Bucks beat the Indiana Pacers on April 7?", "sports", "", "04-08T01:30", "M"),
    ("Celtics v Cavaliers", "Will the Boston Celtics beat the Cleveland Cavaliers in Game 1?", "sports", "", "04-22T00:45", "H"),
    ("Thunder v Grizzlies", "Will the Oklahoma City Thunder beat the Memphis Grizzlies in Game 2?", "sports", "", "04-21T02:15", "H"),
    ("Knicks v Pistons", "Will the New York Knicks beat the Detroit Pistons in Game 3?", "sports", "", "04-26T00:10", "M"),
    ("Warriors v Timberwolves", "Will the Golden State Warriors beat the Minnesota Timberwolves in Game 1?", "sports", "", "05-07T03:30", "M"),
    ("SL Benfica 2026-02-25", "Will SL Benfica win on 2026-02-25?", "sports", "rma-ben-2026-02-25", "02-25T21:52", "M"),
    ("Rayo Vallecano 2026-02-14", "Will Rayo Vallecano win on 2026-02-14?", "sports", "atm-ray-2026-02-14", "02-14T19:58", "M"),
    ("Newcastle United 2026-03-18", "Will Newcastle United win on 2026-03-18?", "sports", "fcb-new-2026-03-18", "03-18T21:49", "M"),
    ("Chelsea 2026-02-27", "Will Chelsea win on 2026-02-27?", "sports", "avl-che-2026-02-27", "02-27T21:55", "H"),
    ("Olympique de Marseille 2026-02-15", "Will Olympique de Marseille win on 2026-02-15?", "sports", "oly-mar-2026-02-15", "02-15T21:50", "M"),
    ("Arsenal 2026-03-01", "Will Arsenal win on 2026-03-01?", "sports", "ars-mci-2026-03-01", "03-01T18:25", "H"),
    ("Manchester City 2026-03-01", "Will Manchester City win on 2026-03-01?", "sports", "ars-mci-2026-03-01", "03-01T18:25", "M"),
    ("Liverpool 2026-03-08", "Will Liverpool win on 2026-03-08?", "sports", "liv-eve-2026-03-08", "03-08T16:28", "H"),
    ("Everton 2026-03-08", "Will Everton win on 2026-03-08?", "sports", "liv-eve-2026-03-08", "03-08T16:28", "M"),
    ("Bayern Munich 2026-03-14", "Will Bayern Munich win on 2026-03-14?", "sports", "bay-bvb-2026-03-14", "03-14T19:24", "H"),
    ("Borussia Dortmund 2026-03-14", "Will Borussia Dortmund win on 2026-03-14?", "sports", "bay-bvb-2026-03-14", "03-14T19:24", "M"),
    ("Inter Milan 2026-04-04", "Will Inter Milan win on 2026-04-04?", "sports", "int-acm-2026-04-04", "04-04T20:40", "H"),
    ("AC Milan 2026-04-04", "Will AC Milan win on 2026-04-04?", "sports", "int-acm-2026-04-04", "04-04T20:40", "M"),
    ("Paris Saint-Germain 2026-04-15", "Will Paris Saint-Germain win on 2026-04-15?", "sports", "psg-lev-2026-04-15", "04-15T20:52", "H"),
    ("Bayer Leverkusen 2026-04-15", "Will Bayer Leverkusen win on 2026-04-15?", "sports", "psg-lev-2026-04-15", "04-15T20:52", "M"),
    ("Manchester United 2026-04-26", "Will Manchester United win on 2026-04-26?", "sports", "mun-tot-2026-04-26", "04-26T15:27", "H"),
    ("Tottenham Hotspur 2026-04-26", "Will Tottenham Hotspur win on 2026-04-26?", "sports", "mun-tot-2026-04-26", "04-26T15:27", "M"),
    ("Napoli 2026-05-03", "Will Napoli win on 2026-05-03?", "sports", "nap-juv-2026-05-03", "05-03T20:41", "H"),
    ("Juventus 2026-05-03", "Will Juventus win on 2026-05-03?", "sports", "nap-juv-2026-05-03", "05-03T20:41", "M"),
    ("UFC Pereira v Ankalaev", "Will Alex Pereira defeat Magomed Ankalaev at UFC 326?", "sports", "", "03-08T05:30", "H"),
    ("UFC Makhachev v Della Maddalena", "Will Islam Makhachev defeat Jack Della Maddalena at UFC 329?", "sports", "ufc-329", "05-10T04:40", "M"),
    ("UFC Topuria v Oliveira", "Will Ilia Topuria defeat Charles Oliveira at UFC 329?", "sports", "ufc-329", "05-10T05:20", "H"),
    ("Sinner wins Indian Wells", "Will Jannik Sinner win the 2026 Indian Wells Open?", "", "", "03-15T22:30", "H"),
    ("Alcaraz wins Miami Open", "Will Carlos Alcaraz win the 2026 Miami Open?", "sports", "", "03-29T21:40", "M"),
    ("Sabalenka wins Madrid Open", "Will Aryna Sabalenka win the 2026 Madrid Open?", "sports", "", "05-02T18:50", "H"),
    ("Scheffler wins 2026 Masters", "Will Scottie Scheffler win the 2026 Masters Tournament?", "sports", "masters-2026", "04-12T22:41", "M"),
    ("McIlroy wins 2026 Masters", "Will Rory McIlroy win the 2026 Masters Tournament?", "sports", "masters-2026", "04-12T22:41", "H"),
    ("LoL T1 v Gen.G", "Will T1 beat Gen.G at League of Legends First Stand?", "sports", "lol-first-stand-2026", "03-16T09:40", "H"),
    ("CS2 Vitality v MOUZ", "Will Team Vitality beat MOUZ at IEM Melbourne?", "sports", "", "04-19T17:25", "M"),
    ("Valorant Fnatic v Sentinels", "Will Fnatic beat Sentinels at Valorant Masters Toronto?", "sports", "", "05-04T20:10", "M"),
    ("Duke v Houston", "Will Duke beat Houston in the Final Four?", "sports", "", "04-05T00:50", "H"),
    ("Florida v Auburn", "Will Florida beat Auburn in the Final Four?", "sports", "", "04-05T03:20", "M"),
    ("NCAA champion: Duke", "Will Duke win the 2026 NCAA men's basketball championship?", "sports", "ncaa-champion-2026", "04-07T03:05", "H"),
    ("NCAA champion: Florida", "Will Florida win the 2026 NCAA men's basketball championship?", "sports", "ncaa-champion-2026", "04-07T03:05", "M"),
    ("Oilers v Panthers", "Will the Edmonton Oilers beat the Florida Panthers on March 2?", "sports", "", "03-03T02:30", "H"),
    ("Maple Leafs v Canadiens", "Will the Toronto Maple Leafs beat the Montreal Canadiens on April 10?", "sports", "", "04-11T01:40", "H"),
    ("Norris wins Bahrain Grand Prix", "Will Lando Norris win the 2026 Bahrain Grand Prix?", "sports", "", "04-12T16:35", "M"),
    ("NBA MVP: Shai Gilgeous-Alexander", "Will Shai Gilgeous-Alexander win the 2025–26 NBA MVP award?", "sports", "nba-mvp-2026", "05-08T21:00", "H"),
    ("NBA MVP: Nikola Jokic", "Will Nikola Jokic win the 2025–26 NBA MVP award?", "sports", "nba-mvp-2026", "05-08T21:00", "M"),
    ("US strikes Iran by March 31?", "Will the United States strike Iran by March 31?", "politics", "iran-us-2026", "03-01T06:15", "H"),
    ("Khamenei out by Feb 28?", "Will Ali Khamenei cease to be Supreme Leader of Iran by February 28?", "politics", "iran-us-2026", "02-28T23:50", "M"),
    ("Khamenei out by March 31?", "Will Ali Khamenei cease to be Supreme Leader of Iran by March 31?", "politics", "iran-us-2026", "03-31T22:00", "M"),
    ("Iran nuclear deal by April 30?", "Will Iran and the United States sign a nuclear deal by April 30?", "politics", "iran-us-2026", "04-30T21:30", "M"),
    ("Hungary election (Fidesz)", "Will Fidesz win the most seats in the Hungarian parliamentary election?", "politics", "hungary-2026", "04-12T19:05", "M"),
    ("Hungary election (Tisza)", "Will the Tisza Party win the most seats in the Hungarian parliamentary election?", "politics", "hungary-2026", "04-12T19:05", "H"),
    ("Russia x Ukraine ceasefire by April 30?", "Will Russia and Ukraine agree to a ceasefire by April 30?", "", "russia-ukraine-2026", "04-30T20:00", "M"),
    ("Zelensky-Putin meeting by April 30?", "Will Volodymyr Zelensky and Vladimir Putin meet in person by April 30?", "politics", "russia-ukraine-2026", "04-29T18:30", "M"),
    ("Putin-Trump meeting by March 31?", "Will Vladimir Putin and Donald Trump meet in person by March 31?", "politics", "russia-ukraine-2026", "03-20T14:10", "H"),
    ("Zelensky out by June 30?", "Will Volodymyr Zelensky leave office by June 30?", "politics", "russia-ukraine-2026", "05-11T09:00", "M"),
    ("Colombia presidential election: Cepeda", "Will Iván Cepeda win the Colombian presidential election?", "politics", "colombia-2026", "03-09T02:00", "M"),
    ("Colombia presidential election: De la Espriella", "Will Abelardo de la Espriella win the Colombian presidential election?", "politics", "colombia-2026", "03-09T02:00", "M"),
    ("Netanyahu out by June 30?", "Will Benjamin Netanyahu leave office by June 30?", "politics", "", "04-22T12:30", "M"),
    ("Maduro out by March 31?", "Will Nicolás Maduro leave office by March 31?", "politics", "maduro-out-2026", "03-03T08:40", "H"),
    ("Maduro out by June 30?", "Will Nicolás Maduro leave office by June 30?", "politics", "maduro-out-2026", "05-02T15:00", "M"),
    ("Starmer out by June 30?", "Will Keir Starmer leave office by June 30?", "politics", "", "05-08T07:15", "M"),
    ("Fed chair nominee confirmed by May 15?", "Will the Senate confirm Kevin Hassett as Federal Reserve chair by May 15?", "politics", "", "04-28T19:45", "H"),
    ("Greenland purchase in 2026?", "Will the United States acquire Greenland in 2026?", "politics", "", "03-11T16:20", "M"),
    ("Trump impeached in 2026?", "Will Donald Trump be impeached by the House in 2026?", "", "", "04-16T17:05", "M"),
    ("Supreme Court tariff ruling by March 31?", "Will the Supreme Court strike down the IEEPA tariffs by March 31?", "politics", "", "02-20T15:10", "H"),
    ("Duterte trial begins by April 30?", "Will the International Criminal Court open Rodrigo Duterte's trial by April 30?", "politics", "", "04-24T08:30", "M"),
    ("Scottish election: SNP majority", "Will the SNP win a majority in the Scottish Parliament election?", "politics", "uk-devolved-2026", "05-08T04:20", "H"),
    ("Welsh election: Plaid Cymru largest party", "Will Plaid Cymru win the most seats in the Senedd election?", "politics", "uk-devolved-2026", "05-08T14:40", "M"),
    ("Peru election: López Aliaga", "Will Rafael López Aliaga win the Peruvian presidential election?", "politics", "", "04-13T03:10", "M"),
    ("Israel x Hezbollah ceasefire broken by March 31?", "Will Israel strike Beirut by March 31?", "politics", "", "03-23T05:50", "M"),
    ("Bangladesh election: BNP majority", "Will the BNP win a majority in the Bangladeshi general election?", "politics", "", "02-13T18:20", "H"),
    ("Fed cuts rates in March?", "Will the Federal Reserve cut interest rates at the March meeting?", "macro", "fed-march-2026", "03-18T18:00", "H"),
    ("Fed holds rates in March?", "Will the Federal Reserve hold interest rates at the March meeting?", "macro", "fed-march-2026", "03-17T14:30", "M"),
    ("Bitcoin above $100k on March 31?", "Will the price of Bitcoin be above $100,000 on March 31?", "crypto", "btc-march-2026", "03-31T23:10", "M"),
    ("Bitcoin above $80k on March 31?", "Will the price of Bitcoin be above $80,000 on March 31?", "crypto", "btc-march-2026", "03-24T13:40", "H"),
    ("Ethereum above $4,000 on April 30?", "Will the price of Ethereum be above $4,000 on April 30?", "", "", "04-30T23:30", "M"),
    ("Nvidia largest company end of March?", "Will Nvidia be the largest company in the world by market cap on March 31?", "macro", "", "03-31T20:05", "H"),
    ("US recession in 2026?", "Will the NBER declare a US recession in 2026?", "", "", "04-29T12:35", "M"),
    ("Tesla robotaxi launch in New York?", "Will Tesla launch a robotaxi service in New York by June 30?", "macro", "", "04-23T21:15", "M"),
    ("OpenAI announces GPT-6?", "Will OpenAI announce GPT-6 by April 30?", "macro", "", "04-14T17:00", "H"),
    ("Best Picture: One Battle After Another", "Will One Battle After Another win Best Picture at the 98th Academy Awards?", "other", "oscars-2026", "03-16T03:40", "H"),
    ("Best Actor: Timothée Chalamet", "Will Timothée Chalamet win Best Actor at the 98th Academy Awards?", "other", "oscars-2026", "03-16T02:55", "M"),
    ("GTA VI delayed again?", "Will Rockstar delay Grand Theft Auto VI again before May 26?", "", "", "05-06T15:00", "M"),
    ("Taylor Swift announces tour?", "Will Taylor Swift announce a new concert tour by April 30?", "other", "", "04-09T16:45", "H"),
    ("Eurovision 2026 winner: Finland", "Will Finland win the Eurovision Song Contest 2026?", "other", "", "05-12T21:30", "M"),
];

/// Eligible markets that never trade inside the sampling window.
const B_IDLE: &[(&str, &str, &str, &str)] = &[
    ("Super Bowl LX MVP: Sam Darnold", "Will Sam Darnold be named Super Bowl LX MVP?", "sports", "super-bowl-lx-mvp"),
    ("Super Bowl LX MVP: Drake Maye", "Will Drake Maye be named Super Bowl LX MVP?", "sports", "super-bowl-lx-mvp"),
    ("Seahawks win Super Bowl LX", "Will the Seattle Seahawks win Super Bowl LX?", "sports", "super-bowl-lx"),
    ("Patriots win Super Bowl LX", "Will the New England Patriots win Super Bowl LX?", "sports", "super-bowl-lx"),
    ("Super Bowl LX halftime guest", "Will a guest join Bad Bunny during the Super Bowl LX halftime show?", "other", ""),
    ("Musk trillionaire by 2027?", "Will Elon Musk become a trillionaire before 2027?", "other", ""),
    ("Humans on Mars by 2030?", "Will humans land on Mars before 2030?", "other", ""),
    ("Ohtani 60 home runs in 2026?", "Will Shohei Ohtani hit 60 home runs in 2026?", "sports", ""),
    ("Gold above $5,000 by December 31?", "Will gold trade above $5,000 by December 31?", "macro", ""),
    ("Foldable iPhone announced in 2026?", "Will Apple announce a foldable iPhone in 2026?", "macro", ""),
    ("Saudi Arabia normalizes with Israel in 2026?", "Will Saudi Arabia normalize relations with Israel in 2026?", "politics", ""),
    ("Messi retires in 2026?", "Will Lionel Messi retire from professional football in 2026?", "sports", ""),
    ("Arsenal win the Premier League?", "Will Arsenal win the 2025–26 Premier League?", "sports", "premier-league-2026"),
    ("Liverpool win the Premier League?", "Will Liverpool win the 2025–26 Premier League?", "sports", "premier-league-2026"),
    ("PSG win the Champions League?", "Will Paris Saint-Germain win the 2025–26 Champions League?", "sports", "ucl-2026"),
    ("Bitcoin reaches $150k in 2026?", "Will Bitcoin reach $150,000 in 2026?", "crypto", ""),
    ("North Korea nuclear test in 2026?", "Will North Korea conduct a nuclear test in 2026?", "politics", ""),
    ("Tesla Optimus on sale in 2026?", "Will Tesla sell Optimus robots to consumers in 2026?", "macro", ""),
    ("Pope Leo visits China in 2026?", "Will Pope Leo XIV visit China in 2026?", "other", ""),
    ("Canada joins the United States?", "Will Canada become part of the United States in 2026?", "politics", ""),
    ("GTA VI released in 2026?", "Will Grand Theft Auto VI be released in 2026?", "other", ""),
];

const BELOW_FLOOR: &[&str] = &[
    "Jazz v Hornets", "Nets v Raptors", "Wizards v Hawks", "Blazers v Pelicans", "Sevilla 2026-03-02",
    "Torino 2026-04-12", "Cagliari 2026-02-22", "Norwich City 2026-03-21",
];
const STALE: &[&str] = &[
    "Government shutdown ends by January 31?", "Bitcoin above $90k on January 31?",
    "Golden Globes Best Drama", "Bills v Jaguars",
];
const MULTI_OUTCOME: &[&str] = &["Hungary election winner", "Fed decision in March", "Masters winner"];
const DUPLICATES: &[&str] = &[
    "Real Madrid 2026-02-25", "Nuggets v Thunder", "Fed cuts rates in March?", "Taylor Swift announces tour?",
];
const BEYOND_TOP_K: &[&str] = &[
    "Kings v Jazz", "Hornets v Nets", "Getafe 2026-03-07", "Mainz 2026-04-18", "Lecce 2026-02-28", "Hawks v Wizards",
];

// ---- documents -------------------------------------------------------------

const NEWS_FILLER: &[&str] = &[
    "Regional council approves new cycling lanes",
    "Weekend weather: mild temperatures and light showers",
    "Recipe of the day: slow-roasted tomatoes with herbs",
    "Library extends its opening hours for the exam season",
    "Review: a quiet novel about lighthouse keepers",
    "Commuter rail timetable changes take effect next month",
    "Gardening tips for the first warm weeks of spring",
    "Museum opens an exhibition of glazed ceramic tiles",
    "Startup raises seed funding for a grocery delivery app",
    "School board discusses changes to the lunch menu",
    "Classic car rally draws crowds to the old town",
    "Veterinarians warn pet owners about ticks this season",
];

const TWEET_FILLER: &[&str] = &[
    "just finished a long run, legs are toast",
    "coffee first, opinions later",
    "anyone else watching the sunset right now?",
    "new playlist is up, link in bio",
    "my cat refuses to leave the keyboard",
    "rain all day again, perfect reading weather",
    "shipping a small bug fix before lunch",
    "thinking about pizza for dinner honestly",
];

const HANDLES: &[&str] = &[
    "wire_desk", "courtside_live", "pitchside_now", "market_pulse", "newsroom_ticker", "hoops_feed",
    "polls_watch", "global_brief", "frontline_notes", "breaking_board",
];

const NEWS_TAILS: &[&str] = &[
    "what we know so far", "live updates", "reaction and analysis", "the key moments",
    "officials respond", "full report",
];

const SECONDARY: &[&str] = &["bluesky", "facebook", "youtube", "reddit", "blog", "forum", "instagram"];

const SLUG: &AsciiSet = &CONTROLS.add(b' ').add(b'"').add(b'#').add(b'%').add(b'<').add(b'>').add(b'?');

fn date(md: &str) -> NaiveDate {
    NaiveDate::parse_from_str(&format!("2026-{md}"), "%Y-%m-%d").expect("fixture date")
}

fn at(md_hm: &str) -> Timestamp {
    let dt = NaiveDateTime::parse_from_str(&format!("2026-{md_hm}"), "%Y-%m-%dT%H:%M").expect("fixture time");
    Timestamp(dt.and_utc().timestamp_millis())
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn link(article: &str, shown: &str) -> String {
    let slug = utf8_percent_encode(&article.replace(' ', "_"), SLUG).to_string();
    format!(r#"<a href="/wiki/{slug}" title="{}">{}</a>"#, esc(article), esc(shown))
}

/// `[[A|b]]` markup to (html, plain text, first linked article).
fn render(src: &str) -> (String, String, Option<String>) {
    let (mut html, mut plain, mut first) = (String::new(), String::new(), None);
    let mut rest = src;
    while let Some(i) = rest.find("[[") {
        html.push_str(&esc(&rest[..i]));
        plain.push_str(&rest[..i]);
        let j = rest[i..].find("]]").expect("closed link") + i;
        let inner = &rest[i + 2..j];
        let (article, shown) = inner.split_once('|').unwrap_or((inner, inner));
        html.push_str(&link(article, shown));
        plain.push_str(shown);
        first.get_or_insert_with(|| article.to_string());
        rest = &rest[j + 2..];
    }
    html.push_str(&esc(rest));
    plain.push_str(rest);
    (html, plain, first)
}

fn parse_plan(code: &str) -> Option<Plan> {
    Some(match code {
        "" => return None,
        "H" => Plan::Hit { winner: Channel::News },
        "M" => Plan::Miss(MissKind::Silent),
        "MP" => Plan::Miss(MissKind::Polluted),
        "MU" => Plan::Miss(MissKind::Unverifiable),
        "PROBE" => Plan::Probe,
        d => {
            let minutes: f64 = d.strip_prefix('D').expect("plan code").parse().expect("paired delta");
            Plan::Paired { delta_ms: (minutes * MS_PER_MINUTE as f64).round() as i64 }
        }
    })
}

fn channel(s: &str) -> Channel {
    s.parse().expect("static channel label")
}

/// Winner labels, shuffled so no category gets a block of one channel.
fn winner_pool(counts: &[(&str, usize)], rng: &mut ChaCha8Rng) -> Vec<Channel> {
    let mut pool: Vec<Channel> = counts.iter().flat_map(|(c, n)| std::iter::repeat_n(channel(c), *n)).collect();
    pool.shuffle(rng);
    pool
}

struct MemPages(BTreeMap<String, String>);

impl WcepPages for MemPages {
    fn month_html(&self, year: i32, month: u32) -> Result<String> {
        let name = format!("{}.html", wcep::month_page_name(year, month));
        self.0.get(&name).cloned().ok_or_else(|| Error::NotFound(name))
    }
}

struct Bullet {
    date: NaiveDate,
    heading: String,
    topic: String,
    html: String,
    plain: String,
    article: String,
    pageviews: Option<u64>,
}

fn bullet(date: NaiveDate, heading: &str, topic: &str, text: &str, pv: Option<u64>) -> Bullet {
    let (html, plain, first) = render(text);
    let article = if topic.is_empty() { first.expect("bullet has a link") } else { topic.to_string() };
    Bullet { date, heading: heading.into(), topic: topic.into(), html, plain, article, pageviews: pv }
}

fn day_html(date: NaiveDate, bullets: &[&Bullet], rng: &mut ChaCha8Rng) -> String {
    let id = format!("{}_{}_{}", date.year(), date.format("%B"), date.day());
    let mut s = format!(
        "<div class=\"current-events-main vevent\" id=\"{id}\" role=\"region\">\n<div class=\"current-events-heading plainlinks\">{} ({})</div>\n<div class=\"current-events-content description\">\n",
        date.format("%B %-d, %Y"),
        date.format("%A")
    );
    for h in HEADINGS {
        let here: Vec<&&Bullet> = bullets.iter().filter(|b| b.heading == *h).collect();
        if here.is_empty() {
            continue;
        }
        s.push_str(&format!("<p><b>{h}</b></p>\n<ul>\n"));
        for b in here {
            let src = ["AP", "Reuters", "BBC News", "Al Jazeera", "NPR"][rng.gen_range(0..5)];
            let cite = format!(
                r#" <a rel="nofollow" class="external text" href="https://example.org/story/{}">({src})</a>"#,
                rng.gen_range(100_000..999_999)
            );
            if b.topic.is_empty() {
                s.push_str(&format!("<li>{}{cite}</li>\n", b.html));
            } else {
                s.push_str(&format!(
                    "<li>{}\n<ul>\n<li>{}{cite}</li>\n</ul>\n</li>\n",
                    link(&b.topic, &b.topic),
                    b.html
                ));
            }
        }
        s.push_str("</ul>\n");
    }
    s.push_str("</div>\n</div>\n");
    s
}

fn page_html(title: &str, days: &str) -> String {
    format!(
        "<!DOCTYPE html>\n<html lang=\"en\">\n<head><meta charset=\"UTF-8\"><title>Portal:Current events/{title} - Wikipedia</title></head>\n<body>\n<h1>Portal:Current events/{title}</h1>\n{days}</body>\n</html>\n"
    )
}

struct SampleA {
    pages: BTreeMap<String, String>,
    pageviews: Vec<PageviewRecord>,
    events: Vec<(Event, Plan)>,
}

fn sample_a(rng: &mut ChaCha8Rng) -> Result<SampleA> {
    let lexicon = UsLexicon::default();
    let (from, to) = (date(&A_FROM[5..]), date(&A_TO[5..]));
    let mut bullets: Vec<Bullet> = Vec::new();
    let mut plans: BTreeMap<String, Plan> = BTreeMap::new();
    for (md, heading, topic, text, pv, plan) in A_EVENTS {
        let b = bullet(date(md), heading, topic, text, Some(*pv));
        if !lexicon.matches(&b.plain) {
            return Err(Error::Invariant(format!("planned bullet fails the U.S. filter: {}", b.plain)));
        }
        if let Some(p) = parse_plan(plan) {
            plans.insert(b.plain.clone(), p);
        }
        bullets.push(b);
    }

    // 16 days of 20 bullets then 14 of 19: 586 in window, 171 passing the filter.
    let days: Vec<NaiveDate> = from.iter_days().take_while(|d| *d <= to).collect();
    let quota = |i: usize| if i < 16 { 20 } else { 19 };
    let mut us_fill: Vec<(usize, usize)> = (0..US_PLACES.len())
        .flat_map(|p| (0..NOUNS.len()).map(move |n| (p, n)))
        .collect();
    us_fill.shuffle(rng);
    let mut abroad_fill: Vec<(usize, usize)> = (0..ABROAD.len())
        .flat_map(|p| (0..NOUNS.len()).map(move |n| (p, n)))
        .collect();
    abroad_fill.shuffle(rng);
    let passing_fill = 171 - bullets.len();
    let total: usize = (0..days.len()).map(quota).sum();
    let abroad_needed = total - 171;
    let mut fill_kinds: Vec<bool> = std::iter::repeat_n(true, passing_fill)
        .chain(std::iter::repeat_n(false, abroad_needed))
        .collect();
    fill_kinds.shuffle(rng);
    let mut fill_iter = fill_kinds.into_iter();
    let (mut us_i, mut ab_i) = (0, 0);
    let mut missing_views_done = false;
    for (i, d) in days.iter().enumerate() {
        let have = bullets.iter().filter(|b| b.date == *d).count();
        for _ in have..quota(i) {
            let heading = HEADINGS[rng.gen_range(0..HEADINGS.len())];
            let outcome = OUTCOMES[rng.gen_range(0..OUTCOMES.len())];
            let b = if fill_iter.next().expect("fill count") {
                let (p, n) = us_fill[us_i];
                us_i += 1;
                let (place, noun) = (US_PLACES[p], NOUNS[n]);
                let article = format!("2026 {place} {noun}");
                let shown = capitalize(noun);
                let pv = if missing_views_done { Some(rng.gen_range(90..2_000)) } else { None };
                missing_views_done = true;
                bullet(*d, heading, "", &format!("[[{article}|{shown}]] in {place} {outcome}."), pv)
            } else {
                let (p, n) = abroad_fill[ab_i];
                ab_i += 1;
                let (place, noun) = (ABROAD[p], NOUNS[n]);
                let article = format!("2026 {} {noun}", place.trim_start_matches("the "));
                let shown = capitalize(noun);
                bullet(*d, heading, "", &format!("[[{article}|{shown}]] in {place} {outcome}."), None)
            };
            bullets.push(b);
        }
    }
    // A few bullets just outside the window, on the same pages.
    for (md, text) in [
        ("04-10", "[[2026 Ohio floods|Floods]] in Ohio close dozens of roads."),
        ("04-11", "[[2026 Texas wildfire|A wildfire]] in Texas burns 40,000 acres."),
        ("05-12", "[[2026 Florida storm|A storm]] in Florida knocks out power to 200,000 homes."),
        ("05-12", "[[2026 Kenya floods|Floods]] in Kenya displace thousands of residents."),
    ] {
        bullets.push(bullet(date(md), "Disasters and accidents", "", text, Some(900_000)));
    }

    for b in &bullets {
        let in_window = b.date >= from && b.date <= to;
        let passes = lexicon.matches(&b.plain);
        let planned = A_EVENTS.iter().any(|e| render(e.3).1 == b.plain);
        if in_window && !planned && passes && b.pageviews.is_some_and(|v| v >= 4_617) {
            return Err(Error::Invariant(format!("filler bullet outranks a planned one: {}", b.plain)));
        }
        if in_window && !passes && b.pageviews.is_some() {
            return Err(Error::Invariant(format!("non-U.S. bullet with views: {}", b.plain)));
        }
    }

    let mut pages = BTreeMap::new();
    for (year, month) in wcep::months_covering(from, to) {
        let mut days_html = String::new();
        let mut ds: Vec<NaiveDate> = bullets.iter().filter(|b| b.date.month() == month).map(|b| b.date).collect();
        ds.sort();
        ds.dedup();
        for d in ds {
            let here: Vec<&Bullet> = bullets.iter().filter(|b| b.date == d).collect();
            days_html.push_str(&day_html(d, &here, rng));
            if d == date("04-30") {
                // A day block whose id does not parse; it carries no bullets.
                days_html.push_str(
                    "<div class=\"current-events-main vevent\" id=\"2026_Apirl_31\">\n<div class=\"current-events-content description\">\n<p><b>Sports</b></p>\n</div>\n</div>\n",
                );
            }
        }
        let title = wcep::month_page_name(year, month).replace('_', " ");
        pages.insert(format!("{}.html", wcep::month_page_name(year, month)), page_html(&title, &days_html));
    }

    let pageviews: Vec<PageviewRecord> = bullets
        .iter()
        .filter(|b| b.date >= from && b.date <= to)
        .filter_map(|b| {
            let total = b.pageviews?;
            let day0 = total * 3 / 5;
            Some(PageviewRecord::new(&b.article, b.date, day0, total - day0))
        })
        .collect();

    let seed = wcep::seed_wcep(
        &WcepParams { from, to, cap: wcep::DEFAULT_CAP, top_n: wcep::DEFAULT_TOP_N, parallelism: 1 },
        &MemPages(pages.clone()),
        &lexicon,
        &FixturePageviews::from_records(&pageviews),
    )?;
    let shape = (seed.candidates, seed.passing, seed.ranked.events.len(), seed.distinct_articles);
    if shape != (586, 171, 50, 39) || seed.parse_errors.len() != 1 || seed.warnings.len() != 1 {
        return Err(Error::Invariant(format!(
            "sample A shape {shape:?}, {} parse errors, {} warnings",
            seed.parse_errors.len(),
            seed.warnings.len()
        )));
    }
    let events = seed
        .ranked
        .events
        .into_iter()
        .map(|e| {
            let plan = plans
                .get(&e.description)
                .cloned()
                .ok_or_else(|| Error::Invariant(format!("unplanned event ranked: {}", e.description)))?;
            Ok((e, plan))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleA { pages, pageviews, events })
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
}

struct SampleB {
    markets: Vec<MarketRecord>,
    trades: Vec<Trade>,
    events: Vec<(Event, Plan)>,
}

fn market_id(title: &str, salt: &str) -> String {
    let h = Sha256::digest(format!("{salt}{title}").as_bytes());
    format!("0x{}", &hex::encode(h)[..16])
}

fn market(title: &str, question: &str, cat: &str, group: &str, start: Timestamp, end: Timestamp, vol: f64) -> MarketRecord {
    MarketRecord {
        market_id: market_id(title, ""),
        event_title: title.into(),
        event_group: group.into(),
        question: question.into(),
        category: cat.into(),
        start,
        end,
        lifetime_volume_usd: vol,
        is_binary: true,
    }
}

/// Small trades at least a few hours apart, away from any burst.
fn background(id: &str, span: TimeWindow, avoid: Option<Timestamp>, rng: &mut ChaCha8Rng, out: &mut Vec<Trade>) {
    let mut t = span.start.offset(rng.gen_range(0..3 * MS_PER_HOUR) / 1000 * 1000);
    while t < span.end {
        let near = avoid.is_some_and(|a| (t.0 - a.0).abs() < 2 * MS_PER_HOUR);
        if !near {
            out.push(Trade { market_id: id.into(), ts: t, usd_cents: rng.gen_range(2_000..40_000) });
        }
        t = t.offset(5 * MS_PER_HOUR + rng.gen_range(0..60) * MS_PER_MINUTE + rng.gen_range(0..60) * 1000);
    }
}

fn sample_b(rng: &mut ChaCha8Rng) -> Result<SampleB> {
    let window = TimeWindow::from_dates(date(&B_FROM[5..]), date(&B_TO[5..]))?;
    let n = B_EVENTS.len();
    // Log-spaced volumes with the middle one pinned at $6.1M.
    let mid = n / 2;
    let (top, median, bottom) = (480_000_000.0f64, 6_100_000.0f64, 160_000.0f64);
    let mut vols: Vec<f64> = (0..n)
        .map(|i| {
            let v = if i <= mid {
                median * (top / median).powf((mid - i) as f64 / mid as f64)
            } else {
                median * (bottom / median).powf((i - mid) as f64 / (n - 1 - mid) as f64)
            };
            (v * 100.0).round() / 100.0 + if i == mid { 0.0 } else { rng.gen_range(0..100) as f64 / 100.0 }
        })
        .collect();
    vols[mid] = median;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);

    let mut markets = Vec::new();
    let mut trades = Vec::new();
    let mut plans = BTreeMap::new();
    for (k, (title, question, cat, group, spike, plan)) in B_EVENTS.iter().enumerate() {
        let t_e = at(spike);
        let m = market(title, question, cat, group, t_e.offset(-10 * 24 * MS_PER_HOUR), t_e.offset(2 * 24 * MS_PER_HOUR), vols[order[k]]);
        let span = TimeWindow::new(m.start.max(window.start), m.end.min(window.end))?;
        background(&m.market_id, span, Some(t_e), rng, &mut trades);
        for back in [45, 30, 15, 0] {
            trades.push(Trade {
                market_id: m.market_id.clone(),
                ts: t_e.offset(-back * MS_PER_MINUTE),
                usd_cents: rng.gen_range(800_000..4_000_000),
            });
        }
        if k % 11 == 0 {
            // Heavy trading before the window opens must not move the pin.
            trades.push(Trade {
                market_id: m.market_id.clone(),
                ts: window.start.offset(-MS_PER_HOUR),
                usd_cents: 90_000_000,
            });
        }
        plans.insert(m.market_id.clone(), parse_plan(plan).expect("planned market"));
        markets.push(m);
    }
    let idle_start = at("01-05T00:00");
    for (i, (title, question, cat, group)) in B_IDLE.iter().enumerate() {
        let vol = rng.gen_range(200_000..30_000_000) as f64 + 0.5;
        let super_bowl = title.contains("Super Bowl");
        let end = if super_bowl { at("02-15T00:00") } else { at("12-31T00:00") };
        let m = market(title, question, cat, group, idle_start, end, vol);
        if super_bowl {
            background(&m.market_id, TimeWindow::new(at("01-20T00:00"), at("02-12T12:00"))?, None, rng, &mut trades);
        } else if i % 2 == 0 {
            trades.push(Trade { market_id: m.market_id.clone(), ts: at("01-10T12:00"), usd_cents: 5_000 });
        }
        markets.push(m);
    }
    let ineligible = |title: &str, vol: f64, binary: bool, start: &str, end: &str, salt: &str| {
        let mut m = market(title, &format!("Will {title} resolve Yes?"), "", "", at(start), at(end), vol);
        m.market_id = market_id(title, salt);
        m.is_binary = binary;
        m
    };
    for (i, t) in BELOW_FLOOR.iter().enumerate() {
        markets.push(ineligible(t, 15_000.0 + 10_000.0 * i as f64, true, "03-01T00:00", "03-20T00:00", ""));
    }
    for t in STALE {
        markets.push(ineligible(t, 2_000_000.0, true, "01-02T00:00", "01-31T00:00", ""));
    }
    for t in MULTI_OUTCOME {
        markets.push(ineligible(t, 40_000_000.0, false, "03-01T00:00", "04-20T00:00", ""));
    }
    for (i, t) in DUPLICATES.iter().enumerate() {
        markets.push(ineligible(t, 120_000.0 + 10_000.0 * i as f64, true, "02-15T00:00", "04-20T00:00", "dup"));
    }
    for (i, t) in BEYOND_TOP_K.iter().enumerate() {
        markets.push(ineligible(t, 100_000.0 + 2_000.0 * i as f64, true, "02-20T00:00", "03-20T00:00", ""));
    }
    for m in markets.iter().skip(B_EVENTS.len() + B_IDLE.len()) {
        if m.resolution_window().is_ok_and(|w| w.overlaps(&window)) {
            let span = TimeWindow::new(m.start.max(window.start), m.end.min(window.end))?;
            background(&m.market_id, span, None, rng, &mut trades);
        }
    }
    markets.sort_by(|a, b| a.market_id.cmp(&b.market_id));
    trades.sort_by(|a, b| (a.ts, &a.market_id).cmp(&(b.ts, &b.market_id)));

    let seed = polymarket::seed_polymarket(&markets, trades.clone(), &window, polymarket::DEFAULT_VOLUME_FLOOR, polymarket::DEFAULT_TOP_K)?;
    let shape = (seed.filtered.len(), seed.pinned.events.len(), seed.pinned.dropped.len(), seed.distinct_groups);
    if shape != (130, 109, 21, 76) || seed.median_volume_usd != median {
        return Err(Error::Invariant(format!("sample B shape {shape:?}, median {}", seed.median_volume_usd)));
    }
    let mut events = Vec::new();
    for e in seed.pinned.events {
        let row = B_EVENTS.iter().find(|s| s.0 == e.title).expect("pinned market is planned");
        let want = if row.2.is_empty() {
            polymarket::categorize(row.0, row.1)
        } else {
            Category::parse_lenient(row.2).0
        };
        let intended = match row.0 {
            t if ["Fed chair", "Trump impeached", "Russia x Ukraine"].iter().any(|p| t.starts_with(p)) => Category::Politics,
            "US recession in 2026?" | "Ethereum above $4,000 on April 30?" => Category::MacroCrypto,
            "GTA VI delayed again?" => Category::Other,
            _ if row.2.is_empty() => Category::Sports,
            _ => want,
        };
        if e.category != intended || e.t_e != at(row.4) {
            return Err(Error::Invariant(format!("{}: category {:?} at {}", e.title, e.category, e.t_e)));
        }
        let plan = plans[&e.source_key].clone();
        events.push((e, plan));
    }
    Ok(SampleB { markets, trades, events })
}

// ---- documents ---------------------------------------------------------------

struct DocWriter<'a> {
    rng: &'a mut ChaCha8Rng,
    docs: Vec<FixtureDoc>,
    oembed: BTreeMap<u64, String>,
    next: u64,
}

struct Terms {
    /// One term per X cluster; together they satisfy the mock's AND match.
    x: Vec<String>,
    keywords: KeywordSet,
}

impl Terms {
    fn of(news: &BooleanQuery, x: &BooleanQuery) -> Self {
        Terms {
            x: x.clusters.iter().map(|c| c[0].clone()).collect(),
            keywords: KeywordSet::from_queries(news, x),
        }
    }

    /// Text carrying at least two distinct keywords, for tweet bodies.
    fn rich(&self, news: &BooleanQuery) -> Result<String> {
        let mut parts = self.x.clone();
        let mut extra = news.terms().map(str::to_string).collect::<Vec<_>>().into_iter();
        while self.keywords.count_in(&parts.join(" ")) < 2 {
            match extra.next() {
                Some(t) => parts.push(t),
                None => return Err(Error::Invariant(format!("cannot reach two keywords from {:?}", self.x))),
            }
        }
        Ok(parts.join(" "))
    }
}

impl<'a> DocWriter<'a> {
    fn handle(&mut self) -> String {
        HANDLES[self.rng.gen_range(0..HANDLES.len())].to_string()
    }

    fn url(&mut self, c: &Channel, n: u64) -> String {
        let h = self.handle();
        match c.as_str() {
            "news" => format!("https://www.dailyledger.example/story/{n}"),
            "bluesky" => format!("https://bsky.app/profile/{h}.bsky.social/post/{n}"),
            "facebook_public" => format!("https://www.facebook.com/{h}/posts/{n}"),
            "youtube" => format!("https://www.youtube.com/watch?v=v{n}"),
            "instagram_public" => format!("https://www.instagram.com/p/p{n}/"),
            "forum" => format!("https://forum.example.net/t/{n}"),
            "reddit" => format!("https://www.reddit.com/r/news/comments/{n}/"),
            other => format!("https://{other}.example.org/{n}"),
        }
    }

    fn other(&mut self, c: &Channel, ts: Timestamp, title: String, snippet: String, extra: String) {
        self.next += 1;
        let n = self.next;
        let url = self.url(c, n);
        let author = self.handle();
        self.docs.push(FixtureDoc {
            guid: format!("{}-{n:06}", c.as_str()),
            channel: c.clone(),
            ts,
            title: Some(title),
            snippet: Some(snippet),
            text: String::new(),
            indexed_extra: extra,
            url: Some(url),
            author: Some(author),
        });
    }

    /// `body`: Some(text) writes an oEmbed payload, Some("") an empty one, None a 404.
    fn tweet(&mut self, ts: Timestamp, text: String, extra: String, body: Option<String>) -> Result<String> {
        let id = SnowflakeId::from_timestamp(ts, self.rng.gen_range(0..1 << 22))?;
        let handle = self.handle();
        if let Some(body) = body {
            let file = if body.is_empty() {
                String::new()
            } else {
                let html = format!(
                    "<blockquote class=\"twitter-tweet\"><p lang=\"en\" dir=\"ltr\">{}</p>&mdash; {handle} (@{handle}) <a href=\"https://twitter.com/{handle}/status/{}\">{}</a></blockquote>\n",
                    esc(&body),
                    id.0,
                    ts.to_datetime().format("%B %-d, %Y")
                );
                let v = serde_json::json!({
                    "url": format!("https://twitter.com/{handle}/status/{}", id.0),
                    "author_name": handle,
                    "author_url": format!("https://twitter.com/{handle}"),
                    "html": html,
                    "type": "rich",
                    "provider_name": "Twitter",
                    "version": "1.0",
                });
                serde_json::to_string_pretty(&v)? + "\n"
            };
            self.oembed.insert(id.0, file);
        }
        self.docs.push(FixtureDoc {
            guid: id.0.to_string(),
            channel: Channel::Twitter,
            ts,
            title: None,
            snippet: None,
            text,
            indexed_extra: extra,
            url: Some(format!("https://twitter.com/{handle}/status/{}", id.0)),
            author: Some(handle),
        });
        Ok(id.0.to_string())
    }

    fn filler(&mut self, terms: &Terms, pool: &[&str]) -> Result<String> {
        let start = self.rng.gen_range(0..pool.len());
        (0..pool.len())
            .map(|i| pool[(start + i) % pool.len()])
            .find(|f| terms.keywords.count_in(f) == 0)
            .map(str::to_string)
            .ok_or_else(|| Error::Invariant("no keyword-free filler".into()))
    }

    fn verified(&mut self, c: &Channel, ts: Timestamp, terms: &Terms, news: &BooleanQuery) -> Result<()> {
        if c.is_twitter() {
            let body = format!("{} {}", terms.rich(news)?, ["#breaking", "wow", "huge news", "called it"][self.rng.gen_range(0..4)]);
            self.tweet(ts, body.clone(), String::new(), Some(body))?;
        } else {
            let tail = NEWS_TAILS[self.rng.gen_range(0..NEWS_TAILS.len())];
            let title = format!("{}: {tail}", terms.x.join(", "));
            let snippet = "Coverage as the story develops, with reaction from those involved.".to_string();
            if terms.keywords.count_in(&title) == 0 {
                return Err(Error::Invariant(format!("title carries no keyword: {title}")));
            }
            self.other(c, ts, title, snippet, String::new());
        }
        Ok(())
    }

    fn polluted(&mut self, c: &Channel, ts: Timestamp, terms: &Terms) -> Result<()> {
        let extra = terms.x.join(" ");
        if c.is_twitter() {
            let text = self.filler(terms, TWEET_FILLER)?;
            self.tweet(ts, text.clone(), extra, Some(text))?;
        } else {
            let title = self.filler(terms, NEWS_FILLER)?;
            let snippet = self.filler(terms, NEWS_FILLER)?;
            self.other(c, ts, title, snippet, extra);
        }
        Ok(())
    }
}

fn plan_docs(w: &mut DocWriter, e: &Event, plan: &Plan, news: &BooleanQuery, x: &BooleanQuery, base: Timestamp, k: usize) -> Result<()> {
    let terms = Terms::of(news, x);
    let window_start = e.t_e.offset(-30 * MS_PER_MINUTE);
    match plan {
        Plan::Probe | Plan::Miss(MissKind::Silent) => {}
        Plan::Miss(MissKind::Polluted) => {
            w.polluted(&Channel::News, base, &terms)?;
            w.polluted(&Channel::Twitter, base.offset(7 * MS_PER_MINUTE), &terms)?;
        }
        Plan::Miss(MissKind::Unverifiable) => {
            let body = (k % 2 == 1).then(String::new);
            let text = terms.rich(news)?;
            w.tweet(base, text, String::new(), body)?;
            w.polluted(&Channel::News, base.offset(4 * MS_PER_MINUTE), &terms)?;
        }
        Plan::Hit { winner } => {
            if k.is_multiple_of(4) && base.offset(-3 * MS_PER_MINUTE) >= window_start {
                w.polluted(winner, base.offset(-3 * MS_PER_MINUTE), &terms)?;
            }
            w.verified(winner, base, &terms, news)?;
            if k.is_multiple_of(3) {
                let pool: Vec<&str> = SECONDARY.iter().copied().filter(|c| channel(c) != *winner).collect();
                let second = channel(pool[w.rng.gen_range(0..pool.len())]);
                let later = base.offset(w.rng.gen_range(20..240) * MS_PER_MINUTE);
                w.verified(&second, later, &terms, news)?;
            }
            if k.is_multiple_of(10) {
                // Earlier than the window: the pull never sees it.
                w.verified(winner, e.t_e.offset(-2 * MS_PER_HOUR), &terms, news)?;
            }
        }
        Plan::Paired { delta_ms } => {
            let t_x = base;
            let t_news = t_x.offset(*delta_ms);
            if k.is_multiple_of(4) && t_x.offset(-3 * MS_PER_MINUTE) >= window_start {
                w.tweet(t_x.offset(-3 * MS_PER_MINUTE), terms.rich(news)?, String::new(), None)?;
            }
            w.verified(&Channel::Twitter, t_x, &terms, news)?;
            w.verified(&Channel::News, t_news, &terms, news)?;
            let later = t_x.max(t_news).offset(w.rng.gen_range(15..180) * MS_PER_MINUTE);
            let second = channel(SECONDARY[w.rng.gen_range(0..SECONDARY.len())]);
            w.verified(&second, later, &terms, news)?;
        }
    }
    Ok(())
}

/// Build the whole corpus. Deterministic for a fixed [`SEED`].
pub fn generate() -> Result<Corpus> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let a = sample_a(&mut rng)?;
    let b = sample_b(&mut rng)?;

    let mut a_pool = winner_pool(
        &[("twitter", 6), ("news", 14), ("bluesky", 4), ("facebook", 5), ("youtube", 2), ("forum", 1)],
        &mut rng,
    );
    let mut b_pool = winner_pool(
        &[
            ("twitter", 15), ("news", 5), ("bluesky", 9), ("facebook", 4), ("youtube", 3), ("instagram", 2),
            ("forum", 1), ("reddit", 1),
        ],
        &mut rng,
    );
    let mut plans = BTreeMap::new();
    let mut w = DocWriter { rng: &mut rng, docs: Vec::new(), oembed: BTreeMap::new(), next: 0 };
    let mut queries: Vec<(Event, BooleanQuery)> = Vec::new();
    let mut probe = None;
    let all = a.events.iter().map(|p| (p, true)).chain(b.events.iter().map(|p| (p, false)));
    for (k, ((e, plan), is_a)) in all.enumerate() {
        let plan = match plan {
            Plan::Hit { .. } => {
                let pool = if is_a { &mut a_pool } else { &mut b_pool };
                Plan::Hit { winner: pool.pop().expect("winner pool sized to the hits") }
            }
            p => p.clone(),
        };
        let draft = draft_event(e, &FallbackBackend, DEFAULT_SPECIFICITY_THRESHOLD)?;
        let (news, x) = (&draft.queries.news, &draft.queries.x);
        let base = match (&plan, is_a) {
            (Plan::Paired { .. }, true) => e.t_e.offset(9 * MS_PER_HOUR),
            (_, true) => e.t_e.offset(6 * MS_PER_HOUR + w.rng.gen_range(0..600) * MS_PER_MINUTE),
            (Plan::Paired { delta_ms }, false) if *delta_ms > 500 * MS_PER_MINUTE => e.t_e.offset(-25 * MS_PER_MINUTE),
            (Plan::Paired { delta_ms }, false) if *delta_ms > 100 * MS_PER_MINUTE => e.t_e.offset(-20 * MS_PER_MINUTE),
            (Plan::Paired { .. }, false) => e.t_e.offset(12 * MS_PER_MINUTE),
            (_, false) => e.t_e.offset(w.rng.gen_range(3..40) * MS_PER_MINUTE),
        };
        plan_docs(&mut w, e, &plan, news, x, base, k)?;
        if plan == Plan::Probe {
            probe = Some((e.clone(), x.clone()));
        }
        queries.push((e.clone(), x.clone()));
        plans.insert(e.event_id.clone(), plan);
    }
    if !a_pool.is_empty() || !b_pool.is_empty() {
        return Err(Error::Invariant("winner pools not exhausted".into()));
    }

    // The probe target: nothing until the ladder is down to the country.
    let (probe_event, probe_x) = probe.ok_or_else(|| Error::Invariant("no probe event planned".into()))?;
    let ladder = broaden_ladder(&probe_x, &probe_event, crate::drafting::ladder::DEFAULT_LEVELS)?;
    let polio_title = "Gunmen kill two polio vaccination workers in Pakistan's Khyber Pakhtunkhwa province".to_string();
    let polio_at = probe_event.t_e.offset(9 * MS_PER_HOUR + 10 * MS_PER_MINUTE);
    w.other(&Channel::News, polio_at, polio_title.clone(), "Police say the team was attacked on its way to a vaccination drive.".into(), String::new());
    let probe_guid = w.docs.last().expect("just pushed").guid.clone();
    w.other(
        &Channel::News,
        probe_event.t_e.offset(15 * MS_PER_HOUR),
        "Pakistan names an unchanged squad for the one-day series".into(),
        "Selectors keep faith with the side that won in the spring.".into(),
        String::new(),
    );
    let hay = polio_title.to_lowercase();
    let last = ladder.len() - 1;
    for (i, q) in ladder.iter().enumerate() {
        if q.matches_lowercase(&hay) != (i == last) {
            return Err(Error::Invariant(format!("probe ladder level {} vs polio doc: {}", i + 1, q.render())));
        }
    }

    // Background chatter that no query should pick up.
    let spans = [(A_FROM, A_TO), (B_FROM, B_TO)];
    for i in 0..400 {
        let (f, t) = spans[i % 2];
        let (f, t) = (Timestamp::at_midnight(date(&f[5..])).0, Timestamp::at_midnight(date(&t[5..])).0);
        let ts = Timestamp((w.rng.gen_range(f..t) / 1000) * 1000);
        let twitter = i % 3 == 0;
        let text = if twitter {
            TWEET_FILLER[w.rng.gen_range(0..TWEET_FILLER.len())].to_string()
        } else {
            NEWS_FILLER[w.rng.gen_range(0..NEWS_FILLER.len())].to_string()
        };
        let hay = text.to_lowercase();
        if queries.iter().any(|(_, q)| q.matches_lowercase(&hay)) || ladder.iter().any(|q| q.matches_lowercase(&hay)) {
            continue;
        }
        if twitter {
            w.tweet(ts, text.clone(), String::new(), Some(text))?;
        } else {
            let c = channel(["news", "bluesky", "facebook", "forum", "reddit", "blog"][i % 6]);
            w.other(&c, ts, text, "Posted earlier today.".into(), String::new());
        }
    }
    let mut docs = w.docs;
    let oembed = w.oembed;
    docs.sort_by(|a, b| (a.ts, &a.guid).cmp(&(b.ts, &b.guid)));

    let run_toml = format!(
        "# Mock run over the shipped corpus.\nrun_id = \"{RUN_ID}\"\nprovider = \"mock\"\nbackend = \"fallback\"\nfixtures = \".\"\n\n[wcep]\nfrom = \"{A_FROM}\"\nto = \"{A_TO}\"\n\n[polymarket]\nfrom = \"{B_FROM}\"\nto = \"{B_TO}\"\n\n[probe]\nevents = [\"{}\"]\n",
        probe_event.event_id
    );

    Ok(Corpus {
        pages: a.pages,
        pageviews: a.pageviews,
        markets: b.markets,
        trades: b.trades,
        docs,
        oembed,
        run_toml,
        plans,
        probe_event: probe_event.event_id,
        probe_guid,
    })
}

/// Write the corpus under `dir`, replacing earlier generated files.
pub fn write(corpus: &Corpus, dir: &Path) -> Result<()> {
    let wcep_dir = dir.join("wcep");
    let oembed_dir = dir.join("oembed");
    for d in [&wcep_dir, &oembed_dir] {
        if d.exists() {
            fs::remove_dir_all(d)?;
        }
        fs::create_dir_all(d)?;
    }
    for (name, html) in &corpus.pages {
        fs::write(wcep_dir.join(name), html)?;
    }
    wcep::write_pageviews(&dir.join("pageviews.csv"), &corpus.pageviews)?;
    polymarket::write_markets_csv(&dir.join("markets.csv"), &corpus.markets)?;
    polymarket::write_trades_csv(&dir.join("trades.csv"), &corpus.trades)?;
    crate::provider::mock::write_docs(&dir.join("mentions.jsonl"), &corpus.docs)?;
    for (id, body) in &corpus.oembed {
        fs::write(oembed_dir.join(format!("{id}.json")), body)?;
    }
    fs::write(dir.join("run.toml"), &corpus.run_toml)?;
    Ok(())
}

/// Run the mock pipeline over `dir` (output under `scratch`) and list every
/// event whose outcome departs from its plan.
pub fn check(corpus: &Corpus, dir: &Path, scratch: &Path) -> Result<Vec<String>> {
    let cfg = RunConfig::load(&dir.join("run.toml"))?;
    let services = Services::for_config(&cfg)?;
    let mut p = Pipeline::open(cfg, scratch, services)?;
    p.full_run()?;
    let mut problems: Vec<String> = p
        .manifest()
        .events
        .iter()
        .filter_map(|(id, r)| r.failed.as_ref().map(|f| format!("{id}: failed at {}: {}", f.stage.as_str(), f.error)))
        .collect();
    let outcomes = p.outcomes()?;
    let seen: BTreeSet<&str> = outcomes.iter().map(|o| o.event.event_id.as_str()).collect();
    for id in corpus.plans.keys().filter(|id| !seen.contains(id.as_str())) {
        problems.push(format!("{id}: planned but not seeded"));
    }
    for o in &outcomes {
        let id = &o.event.event_id;
        let Some(plan) = corpus.plans.get(id) else {
            problems.push(format!("{id}: seeded without a plan"));
            continue;
        };
        let got: Vec<String> = o.earliest.iter().map(|c| format!("{}@{}", c.channel, c.ts())).collect();
        let first = o.earliest.iter().map(|c| c.ts()).min();
        let firsts: Vec<&Channel> = o.earliest.iter().filter(|c| Some(c.ts()) == first).map(|c| &c.channel).collect();
        let (x, news) = (o.on(&Channel::Twitter), o.on(&Channel::News));
        let ok = match plan {
            Plan::Miss(_) | Plan::Probe => o.earliest.is_empty(),
            Plan::Hit { winner } => firsts == [winner] && !(x.is_some() && news.is_some()),
            Plan::Paired { delta_ms } => match (x, news) {
                (Some(x), Some(n)) => n.ts().0 - x.ts().0 == *delta_ms,
                _ => false,
            },
        };
        if !ok {
            problems.push(format!("{id} ({}): planned {plan:?}, got [{}]", o.event.title, got.join(", ")));
        }
    }
    match p.probe_reports()?.iter().find(|r| r.event_id == corpus.probe_event) {
        None => problems.push("probe report missing".into()),
        Some(r) => {
            let (last, rest) = r.levels.split_last().expect("probe has levels");
            if rest.iter().any(|l| l.count != Some(0)) || last.count.unwrap_or(0) == 0 || last.earliest_guid.as_deref() != Some(&corpus.probe_guid) {
                problems.push(format!("probe shape: {:?}", r.levels.iter().map(|l| l.count).collect::<Vec<_>>()));
            }
        }
    }
    Ok(problems)
}
