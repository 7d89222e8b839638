"""Built-in keyword lexicons for the rule extractor.

Small hand-curated stand-ins good enough for desk-scale runs and demos;
swap in real tagger output via ``extraction.load_pretagged`` for
anything serious.  Aspect categories per domain: food, service,
location, room, bathroom, price, general.
"""

from __future__ import annotations

from .extraction import DomainLexicon

_INTENSIFIERS = frozenset({
    "very", "really", "so", "super", "extremely", "quite", "incredibly", "pretty",
})

_SHARED_SENTIMENTS = {
    "great": "positive",
    "good": "positive",
    "excellent": "positive",
    "amazing": "positive",
    "nice": "positive",
    "lovely": "positive",
    "perfect": "positive",
    "friendly": "positive",
    "helpful": "positive",
    "polite": "positive",
    "clean": "positive",
    "fresh": "positive",
    "cheap": "positive",
    "affordable": "positive",
    "quiet": "positive",
    "tasty": "positive",
    "comfortable": "positive",
    "bad": "negative",
    "terrible": "negative",
    "awful": "negative",
    "horrible": "negative",
    "worst": "negative",
    "rude": "negative",
    "unfriendly": "negative",
    "dirty": "negative",
    "noisy": "negative",
    "slow": "negative",
    "cold": "negative",
    "stale": "negative",
    "expensive": "negative",
    "overpriced": "negative",
    "mediocre": "negative",
}

HOTEL_LEXICON = DomainLexicon(
    domain="hotel",
    aspects={
        "room": "room", "rooms": "room", "bed": "room", "beds": "room",
        "suite": "room", "view": "room",
        "bath": "bathroom", "bathroom": "bathroom", "shower": "bathroom",
        "staff": "service", "service": "service", "reception": "service",
        "personnel": "service",
        "location": "location", "area": "location", "neighborhood": "location",
        "price": "price", "rate": "price", "rates": "price", "value": "price",
        "breakfast": "food", "food": "food", "restaurant": "food",
        "hotel": "general", "place": "general", "stay": "general",
    },
    sentiments={
        **_SHARED_SENTIMENTS,
        "comfy": "positive",
        "spacious": "positive",
        "central": "positive",
        "small": "negative",
        "cramped": "negative",
    },
    intensifiers=_INTENSIFIERS,
)

RESTAURANT_LEXICON = DomainLexicon(
    domain="restaurant",
    aspects={
        "food": "food", "meal": "food", "dish": "food", "dishes": "food",
        "menu": "food", "portions": "food", "pizza": "food", "pasta": "food",
        "sushi": "food", "burger": "food", "chicken": "food", "breakfast": "food",
        "staff": "service", "service": "service", "waiter": "service",
        "waitress": "service", "server": "service",
        "location": "location", "area": "location",
        "restroom": "bathroom", "bathroom": "bathroom",
        "price": "price", "prices": "price", "value": "price", "bill": "price",
        "place": "general", "atmosphere": "general", "ambiance": "general",
        "room": "general",
    },
    sentiments={
        **_SHARED_SENTIMENTS,
        "delicious": "positive",
        "yummy": "positive",
        "bland": "negative",
        "greasy": "negative",
    },
    intensifiers=_INTENSIFIERS,
)

DEFAULT_LEXICONS = {
    "hotel": HOTEL_LEXICON,
    "restaurant": RESTAURANT_LEXICON,
}


def lexicon_for(domain: str) -> DomainLexicon:
    if domain not in DEFAULT_LEXICONS:
        raise KeyError(f"no built-in lexicon for domain {domain!r}; "
                       f"available: {sorted(DEFAULT_LEXICONS)}")
    return DEFAULT_LEXICONS[domain]
