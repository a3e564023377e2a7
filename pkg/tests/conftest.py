from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cis2kit import SpecificRule, StoryEntry, parse_specific_rule

FRED_STORY = (
    "Fred woke up late. He just missed his bus. He then went to his mom's room. "
    "His mom then drives him to school. He makes it to first class on time."
)
FRED_SENTENCES = (
    "Fred woke up late.",
    "He just missed his bus.",
    "He then went to his mom's room.",
    "His mom then drives him to school.",
    "He makes it to first class on time.",
)
FRED_SPECIFIC = "Fred wakes up late >Causes/Enables> Fred misses his bus"
FRED_GENERAL = "Someone_A wakes up late >Causes/Enables> Someone_A misses Something_A"

TOOLS_SENTENCES = (
    "My mother told me to fix the car.",
    "I was unable to do this right away.",
    "I could not find my tools.",
    "I looked everywhere for them.",
    "It turns out they were stolen the night before.",
)
TOOLS_SPECIFIC = "They were stolen the night before >Causes/Enables> I could not find my tools"
TOOLS_GENERAL = "Something_A is stolen >Causes/Enables> Someone_A cannot find Something_A"

TOOLS_ORIGINAL_INPUT = (
    "1: My mother told me to fix the car. I was unable to do this right away. "
    "* I could not find my tools. * I looked everywhere for them. "
    "It turns out they were stolen the night before."
)
TOOLS_TARGET = (
    "They were stolen the night before >Causes/Enables> I could not find my tools ** "
    "Something_A is stolen >Causes/Enables> Someone_A cannot find Something_A"
)
TOOLS_HISTORY_INPUT = "1: My mother told me to fix the car. I was unable to do this right away."
TOOLS_HISTORY_X_INPUT = (
    "1: My mother told me to fix the car. I was unable to do this right away. "
    "* I could not find my tools. *"
)
TOOLS_MASK_X_INPUT = (
    "1: My mother told me to fix the car. I was unable to do this right away. "
    "<masked> I looked everywhere for them. It turns out they were stolen the night before."
)
TOOLS_CIS2_TARGET = "<s_4> >Causes/Enables> <s_2>"

FRED_ORIGINAL_INPUT = (
    "6: * Fred woke up late. * He just missed his bus. He then went to his mom's room. "
    "His mom then drives him to school. He makes it to first class on time."
)
FRED_TARGET = f"{FRED_SPECIFIC} ** {FRED_GENERAL}"
FRED_CIS2_TARGET = "<s_0> >Causes/Enables> <s_1>"


@pytest.fixture
def fred_entry() -> StoryEntry:
    return StoryEntry(
        entry_id="fred",
        sentences=FRED_SENTENCES,
        selected_index=0,
        dimension=6,
        gold_specific=parse_specific_rule(FRED_SPECIFIC),
        gold_general=parse_specific_rule(FRED_GENERAL),
    )


@pytest.fixture
def tools_entry() -> StoryEntry:
    return StoryEntry(
        entry_id="tools",
        sentences=TOOLS_SENTENCES,
        selected_index=2,
        dimension=1,
        gold_specific=parse_specific_rule(TOOLS_SPECIFIC),
        gold_general=parse_specific_rule(TOOLS_GENERAL),
    )


def make_simple_entry(
    *,
    entry_id: str = "simple",
    selected_index: int = 0,
    dimension: int = 6,
    sentences=None,
    specific: SpecificRule | None = None,
) -> StoryEntry:
    sentences = sentences or (
        "Ana met a friend.",
        "They walked to the park.",
        "A storm started suddenly.",
        "Both ran back home.",
        "The afternoon was gone.",
    )
    x_statement = sentences[selected_index].rstrip(".")
    other = sentences[(selected_index + 1) % 5].rstrip(".")
    if specific is None:
        if dimension >= 6:
            specific = SpecificRule(x_statement, ">Causes/Enables>", other)
        else:
            specific = SpecificRule(other, ">Causes/Enables>", x_statement)
    general = SpecificRule("Someone_A does a thing", ">Causes/Enables>", "Someone_A feels it")
    return StoryEntry(
        entry_id=entry_id,
        sentences=tuple(sentences),
        selected_index=selected_index,
        dimension=dimension,
        gold_specific=specific,
        gold_general=general,
    )
