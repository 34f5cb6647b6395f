"""
Suite registry mapping suite and task names to workbench methods.
Single source of truth for the names accepted by --suite and --task.
"""

from typing import Callable, Dict, List, Optional
from dataclasses import dataclass


@dataclass
class SuiteSpec:
    """Specification for a single verification suite or compute task."""
    name: str
    method_name: str  # Method name on the workbench
    syntax: str  # How to request it
    description: str
    category: str
    kind: str = 'verify'  # 'verify' or 'compute'
    aliases: List[str] = None

    def __post_init__(self):
        if self.aliases is None:
            self.aliases = []


# ============================================================================
# SUITE SPECIFICATIONS - Single source of truth
# ============================================================================

SUITE_SPECS = [
    # Operads
    SuiteSpec(
        name='bar_cobar',
        method_name='verify_bar_cobar',
        syntax='--suite bar_cobar',
        description='Axioms, d² = 0 and equivariance of bar, cobar and pair cobar complexes',
        category='Operads'
    ),
    SuiteSpec(
        name='prop34',
        method_name='verify_prop34',
        syntax='--suite prop34',
        description='Comparison zigzag between the module bar construction and X ⊗ Bar',
        category='Operads',
        aliases=['comparison']
    ),
    SuiteSpec(
        name='theorem11',
        method_name='verify_theorem11',
        syntax='--suite theorem11',
        description='Counit η and its factorization φ = r∘l as quasi-isomorphisms',
        category='Operads',
        aliases=['counit']
    ),

    # Drinfeld-Kohno and GRT
    SuiteSpec(
        name='dk_cyclic',
        method_name='verify_dk_cyclic',
        syntax='--suite dk_cyclic',
        description='Cyclic structure on ft: relations, Coxeter relations, presentations',
        category='Drinfeld-Kohno'
    ),
    SuiteSpec(
        name='grt',
        method_name='verify_grt',
        syntax='--suite grt [--phi-file FILE]',
        description='GRT residuals of a candidate, grt dimensions and group law',
        category='Drinfeld-Kohno'
    ),
    SuiteSpec(
        name='prop52',
        method_name='verify_prop52',
        syntax='--suite prop52 [--phi-file FILE]',
        description='Cyclic invariance of the associator for GRT candidates, step by step',
        category='Drinfeld-Kohno',
        aliases=['cyclic_grt']
    ),
    SuiteSpec(
        name='pap',
        method_name='verify_pap',
        syntax='--suite pap',
        description='Parenthesized permutations: counts, cyclic action, associator objects',
        category='Drinfeld-Kohno'
    ),
    SuiteSpec(
        name='ce',
        method_name='verify_ce',
        syntax='--suite ce',
        description='Chevalley-Eilenberg cochains of ft(r) against BV^c(r)',
        category='Drinfeld-Kohno'
    ),

    # BV
    SuiteSpec(
        name='bv_dims',
        method_name='verify_bv_dims',
        syntax='--suite bv_dims',
        description='BV^c dimensions by straightening and by the product formula',
        category='BV'
    ),
    SuiteSpec(
        name='rigidity',
        method_name='verify_rigidity',
        syntax='--suite rigidity',
        description='Comodule endomorphisms and biderivations of the pointed BV comodule',
        category='BV'
    ),
    SuiteSpec(
        name='bv_homology',
        method_name='verify_bv_homology',
        syntax='--suite bv_homology',
        description='Homology of the cobar constructions of BV^c and BV^{c,mod}',
        category='BV'
    ),
    SuiteSpec(
        name='xi',
        method_name='verify_xi',
        syntax='--suite xi',
        description='The derivations ξ and ξ^mod built from Δ',
        category='BV'
    ),
    SuiteSpec(
        name='e1_page',
        method_name='verify_e1_page',
        syntax='--suite e1_page',
        description='E¹ counts from ft((r)) paired with the module cobar homology',
        category='BV'
    ),

    # Compute
    SuiteSpec(
        name='bar_homology',
        method_name='compute_bar_homology',
        syntax='--task bar_homology [--operad NAME] [--arity R] [--variant operad|module]',
        description='Homology table of one arity slice with S_r decompositions',
        category='Compute',
        kind='compute'
    ),
    SuiteSpec(
        name='dims',
        method_name='compute_dims',
        syntax='--task dims [--operad NAME] [--arity R]',
        description='Graded dimensions of operad components',
        category='Compute',
        kind='compute'
    ),
    SuiteSpec(
        name='decompose',
        method_name='compute_decompose',
        syntax='--task decompose [--operad NAME] [--arity R]',
        description='Irreducible decompositions of operad components',
        category='Compute',
        kind='compute'
    ),
    SuiteSpec(
        name='grt_solve',
        method_name='compute_grt_solve',
        syntax='--task grt_solve [--max-weight W]',
        description='Basis of grt weight by weight, with the brute-force count',
        category='Compute',
        kind='compute'
    ),
]

CATEGORY_ORDER = ['Operads', 'Drinfeld-Kohno', 'BV', 'Compute']


# ============================================================================
# REGISTRY BUILDERS
# ============================================================================

def build_suite_registry(workbench) -> Dict[str, Callable]:
    """
    Build suite registry from a workbench instance.

    Args:
        workbench: Workbench instance with all mixins

    Returns:
        Dictionary mapping suite names and aliases to bound methods
    """
    registry = {}

    for spec in SUITE_SPECS:
        try:
            method = getattr(workbench, spec.method_name)
        except AttributeError:
            continue

        registry[spec.name] = method
        for alias in spec.aliases:
            registry[alias] = method

    return registry


def get_suite_help() -> Dict[str, str]:
    """
    Get help text for all suites and tasks.

    Returns:
        Dictionary mapping syntax to descriptions
    """
    return {spec.syntax: spec.description for spec in SUITE_SPECS}


def get_suites_by_category() -> Dict[str, List[str]]:
    """
    Get suite names grouped by category.

    Returns:
        Dictionary mapping category names to lists of suite names
    """
    categories = {}

    for spec in SUITE_SPECS:
        if spec.category not in categories:
            categories[spec.category] = []
        categories[spec.category].append(spec.name)

    return categories


def find_suite_spec(name: str) -> Optional[SuiteSpec]:
    """
    Find suite specification by name or alias.

    Args:
        name: Name or alias of a suite or task

    Returns:
        SuiteSpec if found, None otherwise
    """
    name = name.lower()

    for spec in SUITE_SPECS:
        if spec.name == name or name in spec.aliases:
            return spec

    return None


def get_all_suite_names(kind: Optional[str] = None) -> List[str]:
    """
    Canonical names in table order, optionally of one kind only.

    Args:
        kind: 'verify', 'compute' or None for both
    """
    return [spec.name for spec in SUITE_SPECS if kind is None or spec.kind == kind]


def resolve_names(names: List[str], kind: str) -> List[str]:
    """
    Canonical names for the requested suites or tasks; 'all' expands to every
    name of that kind. Duplicates keep their first position.

    Raises:
        ValueError: unknown name or a name of the other kind
    """
    out: List[str] = []
    for name in names:
        if name.lower() == 'all':
            expanded = get_all_suite_names(kind)
        else:
            spec = find_suite_spec(name)
            if spec is None or spec.kind != kind:
                known = ', '.join(get_all_suite_names(kind))
                raise ValueError(f"unknown {'suite' if kind == 'verify' else 'task'} {name!r}; known: {known}")
            expanded = [spec.name]
        out.extend(n for n in expanded if n not in out)
    return out
