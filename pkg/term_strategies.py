"""
Term Strategies - hypothesis による項の生成戦略
"""

from hypothesis import strategies as st

from poslam.syntax import Abs, App, ES, Var

NAMES = st.sampled_from(['x', 'y', 'z', 'w'])


def _extend_vsc(children):
    return st.one_of(
        st.builds(Abs, NAMES, children),
        st.builds(App, children, children),
        st.builds(ES, children, NAMES, children),
    )


vsc_terms = st.recursive(st.builds(Var, NAMES), _extend_vsc, max_leaves=8)

_var_apps = st.builds(App, st.builds(Var, NAMES), st.builds(Var, NAMES))


def _extend_positive(children):
    return st.one_of(
        st.builds(ES, children, NAMES, _var_apps),
        st.builds(ES, children, NAMES, st.builds(Abs, NAMES, children)),
    )


def _extend_xpositive(children):
    redex = st.builds(App, st.builds(Abs, NAMES, children), st.builds(Var, NAMES))
    return st.one_of(_extend_positive(children), st.builds(ES, children, NAMES, redex))


positive_terms = st.recursive(st.builds(Var, NAMES), _extend_positive, max_leaves=6)
xpositive_terms = st.recursive(st.builds(Var, NAMES), _extend_xpositive, max_leaves=6)


def _shadowing(body, x, w):
    # [x <- \w. q[q <- x w]] の x は外側の [x <- y z] を指す
    lam = Abs(w, ES(Var('q'), 'q', App(Var(x), Var(w))))
    return ES(ES(body, x, lam), x, App(Var('y'), Var('z')))


shadowed_positive_terms = st.builds(_shadowing, positive_terms, NAMES, NAMES)
shadowed_xpositive_terms = st.builds(_shadowing, xpositive_terms, NAMES, NAMES)
