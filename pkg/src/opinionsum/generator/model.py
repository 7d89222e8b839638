"""Encoder-decoder sequence model in plain numpy with manual backprop.

Post-layernorm residual blocks, sinusoidal positions, shared source and
target embeddings (optionally tied to the output projection).  Training
math runs in float64 so analytic gradients can be checked against
central finite differences; finished models are quantized to float32
values (kept in float64 arrays) so checkpoint round-trips are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .vocab import PAD, Vocabulary

NEG_INF = -1e30
LN_EPS = 1e-5


@dataclass(frozen=True)
class ModelDims:
    layers: int = 2
    heads: int = 4
    d_model: int = 128
    d_ff: int = 256
    dropout: float = 0.1
    tie_output: bool = True

    def __post_init__(self):
        if self.d_model % self.heads != 0:
            raise ValueError("d_model must be divisible by heads")
        if min(self.layers, self.heads, self.d_model, self.d_ff) < 1:
            raise ValueError("dims must be positive")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")


# ---------------------------------------------------------------------------
# primitives

def _linear(x, w, b):
    return x @ w + b


def _linear_bwd(dy, x, w):
    flat_x = x.reshape(-1, x.shape[-1])
    flat_dy = dy.reshape(-1, dy.shape[-1])
    dw = flat_x.T @ flat_dy
    db = flat_dy.sum(axis=0)
    dx = dy @ w.T
    return dx, dw, db


def _layernorm(x, g, b):
    mu = x.mean(axis=-1, keepdims=True)
    xc = x - mu
    inv = 1.0 / np.sqrt((xc * xc).mean(axis=-1, keepdims=True) + LN_EPS)
    xhat = xc * inv
    return g * xhat + b, (xhat, inv)


def _layernorm_bwd(dy, cache, g):
    xhat, inv = cache
    dxhat = dy * g
    dg = (dy * xhat).reshape(-1, xhat.shape[-1]).sum(axis=0)
    db = dy.reshape(-1, dy.shape[-1]).sum(axis=0)
    m1 = dxhat.mean(axis=-1, keepdims=True)
    m2 = (dxhat * xhat).mean(axis=-1, keepdims=True)
    dx = inv * (dxhat - m1 - xhat * m2)
    return dx, dg, db


def _softmax(x):
    shifted = x - x.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def _dropout(x, p, rng):
    if rng is None or p == 0.0:
        return x, None
    mask = (rng.random(x.shape) >= p) / (1.0 - p)
    return x * mask, mask


def _dropout_bwd(dy, mask):
    return dy if mask is None else dy * mask


def _split_heads(x, heads):
    b, t, d = x.shape
    return x.reshape(b, t, heads, d // heads).transpose(0, 2, 1, 3)


def _merge_heads(x):
    b, h, t, dh = x.shape
    return x.transpose(0, 2, 1, 3).reshape(b, t, h * dh)


def positional_encoding(length, d_model):
    pos = np.arange(length)[:, None]
    idx = np.arange(d_model)[None, :]
    angle = pos / np.power(10000.0, (2 * (idx // 2)) / d_model)
    return np.where(idx % 2 == 0, np.sin(angle), np.cos(angle))


def _acc(grads, name, value):
    if name in grads:
        grads[name] += value
    else:
        grads[name] = value


# ---------------------------------------------------------------------------
# sublayers

def _attention(params, prefix, xq, xkv, mask, heads, p, rng):
    q = _linear(xq, params[prefix + ".wq"], params[prefix + ".bq"])
    # No key bias: softmax is invariant to a per-query constant shift,
    # so a key bias would be an inert parameter with zero gradient.
    k = xkv @ params[prefix + ".wk"]
    v = _linear(xkv, params[prefix + ".wv"], params[prefix + ".bv"])
    qh, kh, vh = (_split_heads(z, heads) for z in (q, k, v))
    scale = 1.0 / np.sqrt(qh.shape[-1])
    scores = qh @ kh.transpose(0, 1, 3, 2) * scale
    if mask is not None:
        scores = scores + mask
    attn = _softmax(scores)
    attn_d, attn_mask = _dropout(attn, p, rng)
    ctx = _merge_heads(attn_d @ vh)
    out = _linear(ctx, params[prefix + ".wo"], params[prefix + ".bo"])
    cache = (xq, xkv, qh, kh, vh, attn, attn_d, attn_mask, ctx, scale)
    return out, cache


def _attention_bwd(dy, cache, params, prefix, grads, heads):
    """Returns (d_query_input, d_keyvalue_input)."""
    xq, xkv, qh, kh, vh, attn, attn_d, attn_mask, ctx, scale = cache
    dctx, dwo, dbo = _linear_bwd(dy, ctx, params[prefix + ".wo"])
    _acc(grads, prefix + ".wo", dwo)
    _acc(grads, prefix + ".bo", dbo)
    dctx_h = _split_heads(dctx, heads)
    dattn_d = dctx_h @ vh.transpose(0, 1, 3, 2)
    dvh = attn_d.transpose(0, 1, 3, 2) @ dctx_h
    dattn = _dropout_bwd(dattn_d, attn_mask)
    dscores = attn * (dattn - (dattn * attn).sum(axis=-1, keepdims=True))
    dqh = dscores @ kh * scale
    dkh = dscores.transpose(0, 1, 3, 2) @ qh * scale
    dq, dk, dv = (_merge_heads(z) for z in (dqh, dkh, dvh))
    dxq, dwq, dbq = _linear_bwd(dq, xq, params[prefix + ".wq"])
    dxk, dwk, _ = _linear_bwd(dk, xkv, params[prefix + ".wk"])
    dxv, dwv, dbv = _linear_bwd(dv, xkv, params[prefix + ".wv"])
    for name, grad in (("wq", dwq), ("bq", dbq), ("wk", dwk),
                       ("wv", dwv), ("bv", dbv)):
        _acc(grads, f"{prefix}.{name}", grad)
    return dxq, dxk + dxv


def _feedforward(params, prefix, x):
    h1 = _linear(x, params[prefix + ".w1"], params[prefix + ".b1"])
    hr = np.maximum(h1, 0.0)
    out = _linear(hr, params[prefix + ".w2"], params[prefix + ".b2"])
    return out, (x, h1, hr)


def _feedforward_bwd(dy, cache, params, prefix, grads):
    x, h1, hr = cache
    dhr, dw2, db2 = _linear_bwd(dy, hr, params[prefix + ".w2"])
    dh1 = dhr * (h1 > 0.0)
    dx, dw1, db1 = _linear_bwd(dh1, x, params[prefix + ".w1"])
    _acc(grads, prefix + ".w1", dw1)
    _acc(grads, prefix + ".b1", db1)
    _acc(grads, prefix + ".w2", dw2)
    _acc(grads, prefix + ".b2", db2)
    return dx


# y = LN(x + dropout(sub_out)); backward returns the gradient at the
# residual junction (flows straight to x) and the one entering sub_out.

def _sublayer(params, ln_prefix, x, sub_out, p, rng):
    dropped, dmask = _dropout(sub_out, p, rng)
    y, ln_cache = _layernorm(x + dropped, params[ln_prefix + ".g"], params[ln_prefix + ".b"])
    return y, (ln_cache, dmask)


def _sublayer_bwd(dy, cache, params, ln_prefix, grads):
    ln_cache, dmask = cache
    dz, dg, db = _layernorm_bwd(dy, ln_cache, params[ln_prefix + ".g"])
    _acc(grads, ln_prefix + ".g", dg)
    _acc(grads, ln_prefix + ".b", db)
    return dz, _dropout_bwd(dz, dmask)


# ---------------------------------------------------------------------------
# parameter initialization

def _xavier(rng, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def _init_attention(params, prefix, d, rng):
    for name in ("wq", "wk", "wv", "wo"):
        params[f"{prefix}.{name}"] = _xavier(rng, d, d)
    for name in ("bq", "bv", "bo"):
        params[f"{prefix}.{name}"] = np.zeros(d)


def _init_ln(params, prefix, d):
    params[prefix + ".g"] = np.ones(d)
    params[prefix + ".b"] = np.zeros(d)


def _init_params(dims: ModelDims, vocab_size: int, rng) -> dict[str, np.ndarray]:
    d, f = dims.d_model, dims.d_ff
    params: dict[str, np.ndarray] = {}
    params["embed"] = rng.normal(0.0, d ** -0.5, size=(vocab_size, d))
    for i in range(dims.layers):
        pre = f"enc{i}"
        _init_attention(params, pre + ".self", d, rng)
        _init_ln(params, pre + ".ln1", d)
        params[pre + ".ff.w1"] = _xavier(rng, d, f)
        params[pre + ".ff.b1"] = np.zeros(f)
        params[pre + ".ff.w2"] = _xavier(rng, f, d)
        params[pre + ".ff.b2"] = np.zeros(d)
        _init_ln(params, pre + ".ln2", d)
    for i in range(dims.layers):
        pre = f"dec{i}"
        _init_attention(params, pre + ".self", d, rng)
        _init_ln(params, pre + ".ln1", d)
        _init_attention(params, pre + ".cross", d, rng)
        _init_ln(params, pre + ".ln2", d)
        params[pre + ".ff.w1"] = _xavier(rng, d, f)
        params[pre + ".ff.b1"] = np.zeros(f)
        params[pre + ".ff.w2"] = _xavier(rng, f, d)
        params[pre + ".ff.b2"] = np.zeros(d)
        _init_ln(params, pre + ".ln3", d)
    if not dims.tie_output:
        params["out.w"] = _xavier(rng, d, vocab_size)
    params["out.b"] = np.zeros(vocab_size)
    return params


# ---------------------------------------------------------------------------
# model

class GeneratorModel:
    """Holds the parameters and runs forward, backward, and decoding passes.

    A trained model is immutable in practice (nothing mutates params
    outside the training loop) and safe for concurrent decode calls.
    """

    def __init__(self, dims: ModelDims, vocab: Vocabulary, seed: int = 0,
                 params: dict[str, np.ndarray] | None = None):
        self.dims = dims
        self.vocab = vocab
        self.params = params if params is not None else _init_params(
            dims, len(vocab), np.random.default_rng(seed))

    def param_names(self) -> list[str]:
        return list(self.params.keys())

    def quantize_float32(self) -> None:
        """Round every parameter to its float32 value (kept as float64),
        making float32 checkpoint round-trips lossless."""
        for name, value in self.params.items():
            self.params[name] = value.astype(np.float32).astype(np.float64)

    # ---- training-time passes

    def forward(self, src, tgt_in, rng=None):
        """Teacher-forced logits [B, T, V]; pass an rng to enable dropout."""
        p = self.params
        dims = self.dims
        drop = dims.dropout if rng is not None else 0.0
        src_mask = np.where(src == PAD, NEG_INF, 0.0)[:, None, None, :]
        cache: dict = {}

        x, cache["src_embed"] = self._embed(src, drop, rng)
        cache["enc"] = []
        for i in range(dims.layers):
            pre = f"enc{i}"
            a, a_cache = _attention(p, pre + ".self", x, x, src_mask, dims.heads, drop, rng)
            x, s1 = _sublayer(p, pre + ".ln1", x, a, drop, rng)
            f, f_cache = _feedforward(p, pre + ".ff", x)
            x, s2 = _sublayer(p, pre + ".ln2", x, f, drop, rng)
            cache["enc"].append((a_cache, s1, f_cache, s2))
        memory = x

        t = tgt_in.shape[1]
        causal = np.triu(np.full((t, t), NEG_INF), k=1)[None, None, :, :]
        y, cache["tgt_embed"] = self._embed(tgt_in, drop, rng)
        cache["dec"] = []
        for i in range(dims.layers):
            pre = f"dec{i}"
            a, a_cache = _attention(p, pre + ".self", y, y, causal, dims.heads, drop, rng)
            y, s1 = _sublayer(p, pre + ".ln1", y, a, drop, rng)
            c, c_cache = _attention(p, pre + ".cross", y, memory, src_mask, dims.heads, drop, rng)
            y, s2 = _sublayer(p, pre + ".ln2", y, c, drop, rng)
            f, f_cache = _feedforward(p, pre + ".ff", y)
            y, s3 = _sublayer(p, pre + ".ln3", y, f, drop, rng)
            cache["dec"].append((a_cache, s1, c_cache, s2, f_cache, s3))

        w_out = p["embed"].T if dims.tie_output else p["out.w"]
        logits = y @ w_out + p["out.b"]
        cache["dec_out"] = y
        cache["memory"] = memory
        return logits, cache

    def backward(self, dlogits, cache) -> dict[str, np.ndarray]:
        """Gradients for every parameter given d(loss)/d(logits)."""
        p = self.params
        dims = self.dims
        grads: dict[str, np.ndarray] = {}
        y = cache["dec_out"]
        flat_y = y.reshape(-1, y.shape[-1])
        flat_dl = dlogits.reshape(-1, dlogits.shape[-1])
        _acc(grads, "out.b", flat_dl.sum(axis=0))
        if dims.tie_output:
            _acc(grads, "embed", flat_dl.T @ flat_y)
            dy = dlogits @ p["embed"]
        else:
            _acc(grads, "out.w", flat_y.T @ flat_dl)
            dy = dlogits @ p["out.w"].T

        dmem = np.zeros_like(cache["memory"])
        for i in reversed(range(dims.layers)):
            pre = f"dec{i}"
            a_cache, s1, c_cache, s2, f_cache, s3 = cache["dec"][i]
            dz3, dsub3 = _sublayer_bwd(dy, s3, p, pre + ".ln3", grads)
            dy = dz3 + _feedforward_bwd(dsub3, f_cache, p, pre + ".ff", grads)
            dz2, dsub2 = _sublayer_bwd(dy, s2, p, pre + ".ln2", grads)
            dq, dkv = _attention_bwd(dsub2, c_cache, p, pre + ".cross", grads, dims.heads)
            dmem += dkv
            dy = dz2 + dq
            dz1, dsub1 = _sublayer_bwd(dy, s1, p, pre + ".ln1", grads)
            dq, dkv = _attention_bwd(dsub1, a_cache, p, pre + ".self", grads, dims.heads)
            dy = dz1 + dq + dkv
        self._embed_bwd(dy, cache["tgt_embed"], grads)

        dx = dmem
        for i in reversed(range(dims.layers)):
            pre = f"enc{i}"
            a_cache, s1, f_cache, s2 = cache["enc"][i]
            dz2, dsub2 = _sublayer_bwd(dx, s2, p, pre + ".ln2", grads)
            dx = dz2 + _feedforward_bwd(dsub2, f_cache, p, pre + ".ff", grads)
            dz1, dsub1 = _sublayer_bwd(dx, s1, p, pre + ".ln1", grads)
            dq, dkv = _attention_bwd(dsub1, a_cache, p, pre + ".self", grads, dims.heads)
            dx = dz1 + dq + dkv
        self._embed_bwd(dx, cache["src_embed"], grads)
        return grads

    def _embed(self, ids, drop, rng):
        d = self.dims.d_model
        scale = np.sqrt(d)
        x = self.params["embed"][ids] * scale + positional_encoding(ids.shape[1], d)
        x, dmask = _dropout(x, drop, rng)
        return x, (ids, dmask, scale)

    def _embed_bwd(self, dx, cache, grads):
        ids, dmask, scale = cache
        dx = _dropout_bwd(dx, dmask)
        de = np.zeros_like(self.params["embed"])
        np.add.at(de, ids.ravel(), (dx * scale).reshape(-1, dx.shape[-1]))
        _acc(grads, "embed", de)

    # ---- decoding-time passes (no dropout)

    def encode(self, src):
        """Encoder memory for a batch of source id rows [B, S]."""
        src = np.asarray(src)
        p = self.params
        dims = self.dims
        src_mask = np.where(src == PAD, NEG_INF, 0.0)[:, None, None, :]
        x, _ = self._embed(src, 0.0, None)
        for i in range(dims.layers):
            pre = f"enc{i}"
            a, _ = _attention(p, pre + ".self", x, x, src_mask, dims.heads, 0.0, None)
            x, _ = _sublayer(p, pre + ".ln1", x, a, 0.0, None)
            f, _ = _feedforward(p, pre + ".ff", x)
            x, _ = _sublayer(p, pre + ".ln2", x, f, 0.0, None)
        return x, src_mask

    def next_logits(self, memory, src_mask, prefixes):
        """Logits [N, V] for the token following each prefix row [N, T].

        ``memory``/``src_mask`` come from :meth:`encode`; their batch
        dimension must be 1 (shared source) or N.
        """
        p = self.params
        dims = self.dims
        prefixes = np.asarray(prefixes)
        n, t = prefixes.shape
        if memory.shape[0] == 1 and n > 1:
            memory = np.broadcast_to(memory, (n,) + memory.shape[1:])
            src_mask = np.broadcast_to(src_mask, (n,) + src_mask.shape[1:])
        causal = np.triu(np.full((t, t), NEG_INF), k=1)[None, None, :, :]
        y, _ = self._embed(prefixes, 0.0, None)
        for i in range(dims.layers):
            pre = f"dec{i}"
            a, _ = _attention(p, pre + ".self", y, y, causal, dims.heads, 0.0, None)
            y, _ = _sublayer(p, pre + ".ln1", y, a, 0.0, None)
            c, _ = _attention(p, pre + ".cross", y, memory, src_mask, dims.heads, 0.0, None)
            y, _ = _sublayer(p, pre + ".ln2", y, c, 0.0, None)
            f, _ = _feedforward(p, pre + ".ff", y)
            y, _ = _sublayer(p, pre + ".ln3", y, f, 0.0, None)
        last = y[:, -1, :]
        w_out = p["embed"].T if dims.tie_output else p["out.w"]
        return last @ w_out + p["out.b"]


# ---------------------------------------------------------------------------
# loss

def cross_entropy(logits, targets):
    """Mean token cross-entropy with PAD positions masked.

    Returns (loss, dlogits, token_count); dlogits already includes the
    1/token_count factor.
    """
    mask = targets != PAD
    n_tokens = int(mask.sum())
    shifted = logits - logits.max(axis=-1, keepdims=True)
    logz = np.log(np.exp(shifted).sum(axis=-1, keepdims=True))
    logprobs = shifted - logz
    if n_tokens == 0:
        return 0.0, np.zeros_like(logits), 0
    b, t = targets.shape
    picked = logprobs[np.arange(b)[:, None], np.arange(t)[None, :], targets]
    loss = -(picked * mask).sum() / n_tokens
    probs = np.exp(logprobs)
    onehot = np.zeros_like(logits)
    onehot[np.arange(b)[:, None], np.arange(t)[None, :], targets] = 1.0
    dlogits = (probs - onehot) * mask[:, :, None] / n_tokens
    return float(loss), dlogits, n_tokens


def loss_and_gradients(model: GeneratorModel, batch, rng=None):
    """Mean masked cross-entropy and gradients for every parameter.

    ``batch`` is (src [B, S], tgt [B, T]) id arrays; the decoder sees
    tgt[:, :-1] and is scored against tgt[:, 1:].
    """
    src, tgt = batch
    src = np.asarray(src)
    tgt = np.asarray(tgt)
    logits, cache = model.forward(src, tgt[:, :-1], rng=rng)
    loss, dlogits, n_tokens = cross_entropy(logits, tgt[:, 1:])
    grads = model.backward(dlogits, cache)
    return loss, grads, n_tokens


def loss_only(model: GeneratorModel, batch) -> float:
    src, tgt = batch
    src = np.asarray(src)
    tgt = np.asarray(tgt)
    logits, _ = model.forward(src, tgt[:, :-1], rng=None)
    loss, _, _ = cross_entropy(logits, tgt[:, 1:])
    return loss
