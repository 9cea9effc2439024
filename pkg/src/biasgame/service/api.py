"""REST service over the platform.

Sessions are bearer tokens issued at registration; curator endpoints use a
separate configured token. Every state-changing request accepts a client
request id (body field or X-Request-Id header) and is idempotent under it:
a retry returns the stored response without re-applying state. A fixed
per-token request cap guards against runaway clients.
"""
from __future__ import annotations

import json
import secrets
from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Iterator

from fastapi import Depends, FastAPI, Header, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel, Field

from ..aggregation.models import Mode
from ..content.models import Origin, SentenceLabel
from ..engine.models import DemographicProfile, EnglishLevel, Gender, Player
from ..errors import GameError, RequestCapExceeded, Unauthorized, ValidationFailed
from ..metrics.report import metrics_report
from .platform import Platform, SubmitResult

DEFAULT_SESSION_TTL_HOURS = 24
DEFAULT_REQUEST_CAP = 100_000


@dataclass
class Session:
    token: str
    player_id: str
    issued_at: datetime
    expires_at: datetime
    requests: int = 0


class SessionStore:
    def __init__(self, platform: Platform, ttl_hours: float = DEFAULT_SESSION_TTL_HOURS,
                 request_cap: int = DEFAULT_REQUEST_CAP):
        self.platform = platform
        self.ttl = timedelta(hours=ttl_hours)
        self.request_cap = request_cap
        self.sessions: dict[str, Session] = {}

    def issue(self, player_id: str) -> Session:
        now = self.platform.clock.now()
        token = secrets.token_urlsafe(24)
        session = Session(token=token, player_id=player_id, issued_at=now, expires_at=now + self.ttl)
        self.sessions[token] = session
        return session

    def authenticate(self, token: str) -> Session:
        session = self.sessions.get(token)
        if session is None:
            raise Unauthorized("unknown token")
        if self.platform.clock.now() >= session.expires_at:
            raise Unauthorized("token expired")
        session.requests += 1
        if session.requests > self.request_cap:
            raise RequestCapExceeded("per-token request cap reached")
        return session


# -- request bodies -----------------------------------------------------------

class RegisterRequest(BaseModel):
    gender: str
    age: int
    education: str
    english: str
    leaning: int
    news_frequency: str
    outlets: list[str] = Field(default_factory=list)
    request_id: str | None = None


class StartRoundRequest(BaseModel):
    mode: str
    topic: str | None = None
    breaking: bool = False
    request_id: str | None = None


class SentenceSubmitRequest(BaseModel):
    sentence_id: str
    label: str | None = None
    marked_tokens: list[int] = Field(default_factory=list)
    action: str | None = None  # quick words: "next"
    request_id: str | None = None


class TapRequest(BaseModel):
    sentence_id: str
    token_index: int
    request_id: str | None = None


class CritiqueRequest(BaseModel):
    sentence_id: str
    decision: str  # "agree" | "disagree"
    label: str | None = None
    marked_tokens: list[int] = Field(default_factory=list)
    request_id: str | None = None


class PurchaseRequest(BaseModel):
    item: str
    topic_id: str
    request_id: str | None = None


class TutorialAnswer(BaseModel):
    ref: str
    label: str
    marked_tokens: list[int] = Field(default_factory=list)


class TutorialSubmitRequest(BaseModel):
    answers: list[TutorialAnswer]
    request_id: str | None = None


class IngestRequest(BaseModel):
    text: str
    topic: str
    article_url: str = ""
    outlet: str = ""
    outlet_leaning: str = "center"
    request_id: str | None = None


class ImportRequest(BaseModel):
    csv_text: str
    request_id: str | None = None


class AssessmentRequest(BaseModel):
    request_id: str | None = None


class CollectRequest(BaseModel):
    request_id: str | None = None


# -- serialization ------------------------------------------------------------

def player_view(player: Player, include_demographics: bool) -> dict:
    view = {
        "id": player.id,
        "currency": player.currency,
        "xp": player.xp,
        "level": player.level,
        "skill": player.skill,
        "tutorial_level": player.tutorial_level,
        "tutorial_complete": player.tutorial_complete,
        "assessment_done": player.assessment_done,
        "unlocked_modes": sorted(m.value for m in player.unlocked_modes),
        "streak_days": player.streak_days,
    }
    if include_demographics:
        d = player.demographics
        view["demographics"] = {
            "gender": d.gender.value,
            "age": d.age,
            "education": d.education,
            "english": d.english.value,
            "leaning": d.leaning,
            "leaning_reported": d.reporting_leaning(),
            "news_frequency": d.news_frequency,
            "outlets": list(d.outlets),
        }
    return view


def round_view(platform: Platform, round_id: str) -> dict:
    r = platform.rounds[round_id]
    sentences = []
    for sid in r.sentence_ids:
        s = platform.content.sentences[sid]
        entry = {
            "id": s.id,
            "text": s.text,
            "tokens": [
                {"index": t.index, "surface": t.surface, "is_stopword": t.is_stopword}
                for t in s.tokens
            ],
        }
        shown = r.shown_annotations.get(sid)
        if shown is not None:
            _author, label, marks = shown
            entry["shown_annotation"] = {"label": label.value, "marked_tokens": sorted(marks)}
        sentences.append(entry)
    return {
        "id": r.id,
        "mode": r.mode.value,
        "topic": r.topic_id,
        "breaking": r.breaking,
        "cursor": r.cursor,
        "completed": r.completed,
        "timer_remaining": r.timer_remaining,
        "sentences": sentences,
    }


def submit_view(res: SubmitResult) -> dict:
    fb = res.feedback
    return {
        "feedback_kind": res.feedback_kind.value,
        "sentence_verdict": fb.sentence_verdict.value,
        "token_verdicts": {str(i): v.value for i, v in sorted(fb.token_verdicts.items())},
        "combined_accuracy": fb.combined_accuracy,
        "word_hits": fb.word_hits,
        "reward_currency": res.reward_currency,
        "reward_xp": res.reward_xp,
        "round_completed": res.round_completed,
        "round_bonus": res.round_bonus,
    }


# -- app factory ---------------------------------------------------------------

def create_app(
    platform: Platform,
    curator_token: str = "curator-secret",
    session_ttl_hours: float = DEFAULT_SESSION_TTL_HOURS,
    request_cap: int = DEFAULT_REQUEST_CAP,
) -> FastAPI:
    app = FastAPI(title="biasgame", version="0.1.0")
    sessions = SessionStore(platform, ttl_hours=session_ttl_hours, request_cap=request_cap)
    app.state.platform = platform
    app.state.sessions = sessions
    idempotency: dict[tuple[str, str], tuple[int, dict]] = {}

    @app.exception_handler(GameError)
    async def game_error_handler(_request: Request, exc: GameError):
        return JSONResponse(
            status_code=exc.http_status,
            content={"code": exc.code, "message": str(exc), "retryable": exc.retryable},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "validation_failed", "message": str(exc.errors()[:3]), "retryable": False},
        )

    def bearer_token(authorization: str | None = Header(default=None)) -> str:
        if not authorization or not authorization.startswith("Bearer "):
            raise Unauthorized("missing bearer token")
        return authorization.removeprefix("Bearer ")

    def current_session(token: str = Depends(bearer_token)) -> Session:
        session = sessions.authenticate(token)
        # the breaking-news tile refills on the first authenticated request of
        # a new day; idempotent within the day
        platform.daily_refresh()
        return session

    def require_curator(token: str = Depends(bearer_token)) -> str:
        if token != curator_token:
            raise Unauthorized("curator credential required")
        return token

    def idempotent(session_key: str, request_id: str | None, status: int, fn):
        if request_id is None:
            return JSONResponse(status_code=status, content=fn())
        key = (session_key, request_id)
        if key in idempotency:
            prev_status, prev_body = idempotency[key]
            return JSONResponse(status_code=prev_status, content=prev_body)
        body = fn()
        idempotency[key] = (status, body)
        return JSONResponse(status_code=status, content=body)

    # -- player lifecycle ------------------------------------------------

    @app.post("/players", status_code=201)
    def register(req: RegisterRequest):
        # registrations have no session yet: scope the idempotency key by the
        # request body so two clients picking the same id cannot collide
        body_key = json.dumps(req.model_dump(exclude={"request_id"}), sort_keys=True)

        def run():
            try:
                gender = Gender(req.gender)
            except ValueError:
                raise ValidationFailed("gender", f"not a survey option: {req.gender!r}")
            try:
                english = EnglishLevel(req.english)
            except ValueError:
                raise ValidationFailed("english", f"not a survey option: {req.english!r}")
            profile = DemographicProfile(
                gender=gender, age=req.age, education=req.education, english=english,
                leaning=req.leaning, news_frequency=req.news_frequency,
                outlets=tuple(req.outlets),
            )
            player = platform.register(profile)
            session = sessions.issue(player.id)
            return {"token": session.token, "player": player_view(player, include_demographics=True)}

        return idempotent(f"register:{body_key}", req.request_id, 201, run)

    @app.get("/players/me")
    def me(session: Session = Depends(current_session)):
        return player_view(platform.players[session.player_id], include_demographics=True)

    # -- tutorial ---------------------------------------------------------

    @app.get("/tutorial/{level}")
    def tutorial_level(level: int, session: Session = Depends(current_session)):
        return platform.tutorial_level_view(level)

    @app.post("/tutorial/{level}")
    def tutorial_submit(level: int, req: TutorialSubmitRequest, session: Session = Depends(current_session)):
        def run():
            answers = [
                (a.ref, SentenceLabel(a.label), a.marked_tokens)
                for a in req.answers
            ]
            res = platform.submit_tutorial(session.player_id, level, answers)
            return {
                "level": res.level,
                "verdicts": res.verdicts,
                "word_feedback": [
                    {str(i): v.value for i, v in sorted(fb.token_verdicts.items())}
                    for fb in res.word_feedback
                ],
                "tutorial_complete": res.tutorial_complete,
                "next_level": res.next_level,
                "unlocked_modes": res.unlocked_modes,
            }

        return idempotent(session.token, req.request_id, 200, run)

    # -- rounds -----------------------------------------------------------

    @app.post("/rounds", status_code=201)
    def start_round(req: StartRoundRequest, session: Session = Depends(current_session)):
        def run():
            try:
                mode = Mode(req.mode)
            except ValueError:
                raise ValidationFailed("mode", f"unknown mode {req.mode!r}")
            r = platform.start_round(session.player_id, mode, req.topic, breaking=req.breaking)
            return round_view(platform, r.id)

        return idempotent(session.token, req.request_id, 201, run)

    @app.post("/assessment", status_code=201)
    def start_assessment(req: AssessmentRequest, session: Session = Depends(current_session)):
        def run():
            r = platform.start_round(session.player_id, Mode.ASSESSMENT)
            return round_view(platform, r.id)

        return idempotent(session.token, req.request_id, 201, run)

    def _owned_round(round_id: str, session: Session):
        r = platform.rounds.get(round_id)
        if r is None or r.player_id != session.player_id:
            raise Unauthorized("not your round")
        return r

    @app.post("/rounds/{round_id}/sentence")
    def submit_sentence(round_id: str, req: SentenceSubmitRequest, session: Session = Depends(current_session)):
        r = _owned_round(round_id, session)

        def run():
            if r.mode is Mode.QUICKWORDS:
                if req.action != "next":
                    raise ValidationFailed("action", "quick words rounds advance with action=next")
                return platform.quick_next(round_id, req.sentence_id)
            label = SentenceLabel(req.label) if req.label else None
            res = platform.submit_sentence(round_id, req.sentence_id, label, req.marked_tokens)
            return submit_view(res)

        return idempotent(session.token, req.request_id, 200, run)

    @app.post("/rounds/{round_id}/tap")
    def tap(round_id: str, req: TapRequest, session: Session = Depends(current_session)):
        _owned_round(round_id, session)

        def run():
            res = platform.quick_tap(round_id, req.sentence_id, req.token_index)
            return {
                "verdict": res.verdict.value,
                "timer_delta": res.timer_delta,
                "currency_delta": res.currency_delta,
                "timer_remaining": res.timer_remaining,
            }

        return idempotent(session.token, req.request_id, 200, run)

    @app.post("/rounds/{round_id}/critique")
    def critique(round_id: str, req: CritiqueRequest, session: Session = Depends(current_session)):
        _owned_round(round_id, session)

        def run():
            if req.decision not in ("agree", "disagree"):
                raise ValidationFailed("decision", "decision must be agree or disagree")
            label = SentenceLabel(req.label) if req.label else None
            res = platform.submit_critique(
                round_id, req.sentence_id, req.decision == "agree", label, req.marked_tokens,
            )
            return submit_view(res)

        return idempotent(session.token, req.request_id, 200, run)

    # -- paper section ------------------------------------------------------

    @app.get("/players/me/paper")
    def paper(unresolved: bool | None = Query(default=None), session: Session = Depends(current_session)):
        return platform.paper_section(session.player_id, unresolved=unresolved)

    @app.post("/players/me/paper/{sentence_id}/collect")
    def collect(sentence_id: str, req: CollectRequest, session: Session = Depends(current_session)):
        def run():
            results = platform.collect_feedback(session.player_id, sentence_id)
            return {
                "collected": [
                    {
                        "sentence_id": fb.sentence_id,
                        "resolved_label": fb.resolved_label.value,
                        "resolved_biased_tokens": sorted(fb.resolved_biased_tokens),
                        "sentence_hit": fb.sentence_hit,
                        "word_hits": fb.word_hits,
                        "reward_currency": fb.reward_currency,
                        "reward_xp": fb.reward_xp,
                    }
                    for fb in results
                ]
            }

        return idempotent(session.token, req.request_id, 200, run)

    # -- topics and shop ------------------------------------------------------

    @app.get("/topics")
    def topics(session: Session = Depends(current_session)):
        return platform.topics_view(session.player_id)

    @app.post("/purchases")
    def purchase(req: PurchaseRequest, session: Session = Depends(current_session)):
        def run():
            player = platform.purchase(session.player_id, req.item, req.topic_id)
            return player_view(player, include_demographics=False)

        return idempotent(session.token, req.request_id, 200, run)

    # -- curator ----------------------------------------------------------------

    @app.post("/content/sentences", status_code=201)
    def ingest(req: IngestRequest, _tok: str = Depends(require_curator)):
        def run():
            s = platform.ingest_sentence(req.text, req.topic, req.article_url, req.outlet, req.outlet_leaning)
            return {"id": s.id, "tokens": [t.surface for t in s.tokens]}

        return idempotent("curator", req.request_id, 201, run)

    @app.post("/content/import")
    def import_baseline(req: ImportRequest, _tok: str = Depends(require_curator)):
        def run():
            report = platform.import_baseline(req.csv_text)
            return {
                "imported": report.imported,
                "rejected": [
                    {"line": r.line, "error": r.error, "message": r.message}
                    for r in report.rejected
                ],
            }

        return idempotent("curator", req.request_id, 200, run)

    @app.get("/export/dataset")
    def export_dataset(
        min_annotations: int | None = None,
        topics: str | None = None,
        min_skill: float | None = None,
        include_baseline: bool = True,
        _tok: str = Depends(require_curator),
    ):
        topic_list = topics.split(",") if topics else None

        def stream() -> Iterator[str]:
            for record in platform.export_dataset(
                min_annotations=min_annotations, topics=topic_list,
                min_skill=min_skill, include_baseline=include_baseline,
            ):
                yield json.dumps(record.to_json_dict(), ensure_ascii=False) + "\n"

        return StreamingResponse(stream(), media_type="application/jsonl")

    @app.get("/export/metrics")
    def export_metrics(
        origin: str | None = None,
        b: int = 1000,
        seed: int = 0,
        level: float = 0.95,
        _tok: str = Depends(require_curator),
    ):
        origin_filter = Origin(origin) if origin else None
        data = platform.reliability_data(origin=origin_filter)
        return metrics_report(data, b=b, seed=seed, level=level)

    return app
