"""Game-with-a-purpose platform for crowdsourcing linguistic-bias annotations.

Players learn to spot biased wording in a tutorial, then annotate news
sentences at the word and sentence level across five game modes. The
platform aggregates annotations into labels by majority vote with fixed
thresholds, pays a direct/delayed-feedback economy, exposes everything over
a REST API backed by an append-only event log, and ships a deterministic
study simulator plus agreement statistics (Krippendorff's alpha with
bootstrap intervals) for dataset evaluation.
"""

__version__ = "0.1.0"
