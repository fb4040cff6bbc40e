"""Likert survey scoring: per-question sums averaged into a score out of 5.

Scoring follows the study convention exactly: sum each question's 1-5
answers, divide by the participant count, and report to three decimals with
half-up rounding. The section score is the unweighted mean of the reported
per-question means.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .model import LikertResponse, SurveySection

CSV_HEADER = ["participant_id", "round", "section", "question_id", "score"]


class IncompleteDataError(ValueError):
    """A participant/question cell is missing or answered more than once."""

    def __init__(self, participant_id: str, question_id: str, problem: str):
        super().__init__(
            f"{problem} answer for participant {participant_id!r}, "
            f"question {question_id!r}"
        )
        self.participant_id = participant_id
        self.question_id = question_id


class SurveyFormatError(ValueError):
    pass


@dataclass
class SurveyReport:
    round: int
    section: SurveySection
    n_participants: int
    per_question_mean: dict = field(default_factory=dict)  # question_id -> mean
    section_mean: float = 0.0

    def to_dict(self) -> dict:
        return {
            "round": self.round,
            "section": self.section.value,
            "n_participants": self.n_participants,
            "per_question_mean": dict(self.per_question_mean),
            "section_mean": self.section_mean,
        }


def _round3(value: Decimal) -> float:
    return float(value.quantize(Decimal("0.001"), rounding=ROUND_HALF_UP))


def aggregate_survey(responses, round: int, section: SurveySection) -> SurveyReport:
    """Score one (round, section) slice of responses.

    Every participant must have answered every question exactly once;
    anything else raises ``IncompleteDataError`` naming the offending cell.
    """
    for response in responses:
        if response.round != round or response.section is not section:
            raise ValueError(
                f"response for participant {response.participant_id!r} does not "
                f"match round {round} / section {section.value}"
            )
    if not responses:
        raise SurveyFormatError(f"no responses for round {round}, section {section.value}")

    participants = sorted({r.participant_id for r in responses})
    questions = sorted({r.question_id for r in responses})

    seen: dict = {}
    for response in responses:
        cell = (response.participant_id, response.question_id)
        if cell in seen:
            raise IncompleteDataError(response.participant_id, response.question_id,
                                      "duplicate")
        seen[cell] = response.score
    for participant in participants:
        for question in questions:
            if (participant, question) not in seen:
                raise IncompleteDataError(participant, question, "missing")

    n = len(participants)
    per_question = {}
    for question in questions:
        total = sum(seen[(p, question)] for p in participants)
        per_question[question] = _round3(Decimal(total) / Decimal(n))

    section_mean = _round3(
        sum(Decimal(str(m)) for m in per_question.values()) / Decimal(len(per_question))
    )
    return SurveyReport(
        round=round,
        section=section,
        n_participants=n,
        per_question_mean=per_question,
        section_mean=section_mean,
    )


def read_responses_csv(path) -> list:
    """Parse the survey CSV (header: participant_id,round,section,question_id,score)."""
    path = Path(path)
    responses = []
    with path.open("r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != CSV_HEADER:
            raise SurveyFormatError(
                f"expected header {','.join(CSV_HEADER)}, got {reader.fieldnames}"
            )
        for line_no, row in enumerate(reader, start=2):
            try:
                responses.append(
                    LikertResponse(
                        participant_id=row["participant_id"].strip(),
                        round=int(row["round"]),
                        section=SurveySection(row["section"].strip()),
                        question_id=row["question_id"].strip(),
                        score=int(row["score"]),
                    )
                )
            except (ValueError, KeyError) as exc:
                raise SurveyFormatError(f"line {line_no}: {exc}") from exc
    return responses
