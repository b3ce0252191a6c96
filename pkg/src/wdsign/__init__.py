"""wdsign: exact sign calculus for selfdual and conjugate-dual Weil-Deligne
parameters, their component groups, epsilon-factor characters and global
multiplicity formulas."""

from .errors import (
    CaseMismatchError,
    ClassificationError,
    DocumentError,
    DomainError,
    EngineError,
    IncompleteTableError,
)
from .field import (
    LocalFieldModel,
    PsiClass,
    QuadraticCharacter,
    SquareClassElement,
    SquareClassGroup,
    char_eval,
    make_complex,
    make_custom,
    make_padic_odd,
    make_real,
    make_split,
)
from .reps import (
    Atom,
    AtomSet,
    EpsilonTable,
    FormalRep,
    ValidationReport,
    det_of_tensor,
    epsilon,
    induce_sign,
    one_dim_conj_type,
    tensor_sign,
    twist,
    validate_epsilon,
)
from .components import (
    CentralizerShape,
    ComponentElement,
    ComponentGroup,
    centralizer,
    component_group,
    eigenspace,
    eta,
    eta_c,
)
from .characters import (
    CaseDescriptor,
    CharacterOnA,
    chi_conj,
    chi_self,
    distinguished,
    hermitian_psi_change_check,
    metaplectic_conjugate,
    metaplectic_eta_bracket,
    metaplectic_psi_prop_check,
    pure_inner_form_of,
)
from .classify import (
    GroupCase,
    UnramifiedRep,
    ambiguity_flag,
    central_sign,
    classify,
    unramified_build,
    unramified_classify,
)
from .globalparams import (
    GlobalAtom,
    GlobalCharacterChoice,
    GlobalParameter,
    Place,
    coherence,
    diagonal_image,
    enumerate_automorphic,
    global_component_group,
    metaplectic_multiplicity,
    multiplicity,
)

__version__ = "0.1.0"
