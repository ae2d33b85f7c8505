#!/usr/bin/env python3
"""Writes the mini-Java fixture graphs, their manifests and golden targets.

Run from this directory: python3 generate.py

Manifests hold hand-traced expectations (states and transitions). Goldens
are derived from the manifests only; the transformation engine is never
consulted.
"""

import json
from pathlib import Path

HERE = Path(__file__).resolve().parent

PACKAGES = ["classifiers", "commons", "members", "modifiers", "parameters",
            "references", "statements", "types"]

# (name, abstract, superclasses, attributes)
VERTEX_CLASSES = [
    ("commons.NamedElement", True, [], [("name", "String")]),
    ("references.ReferenceableElement", True, [], []),
    ("statements.StatementListContainer", True, [], []),
    ("modifiers.AnnotableAndModifiable", True, [], []),
    ("types.TypedElement", True, [], []),
    ("classifiers.Classifier", True,
     ["commons.NamedElement", "references.ReferenceableElement", "modifiers.AnnotableAndModifiable"], []),
    ("classifiers.Class", False, ["classifiers.Classifier"], []),
    ("classifiers.Enumeration", False, ["classifiers.Classifier"], []),
    ("members.Member", True, ["commons.NamedElement", "modifiers.AnnotableAndModifiable"], []),
    ("members.Method", False,
     ["members.Member", "statements.StatementListContainer", "references.ReferenceableElement",
      "types.TypedElement"], []),
    ("members.Field", False, ["members.Member", "references.ReferenceableElement", "types.TypedElement"], []),
    ("members.EnumConstant", False, ["commons.NamedElement", "references.ReferenceableElement"], []),
    ("parameters.OrdinaryParameter", False,
     ["commons.NamedElement", "references.ReferenceableElement", "types.TypedElement"], []),
    ("modifiers.Modifier", True, [], []),
    ("modifiers.Abstract", False, ["modifiers.Modifier"], []),
    ("modifiers.Public", False, ["modifiers.Modifier"], []),
    ("modifiers.Static", False, ["modifiers.Modifier"], []),
    ("types.TypeReference", True, [], []),
    ("types.NamespaceClassifierReference", False, ["types.TypeReference"], []),
    ("types.ClassifierReference", False, ["types.TypeReference"], []),
    ("references.Reference", True, [], []),
    ("references.MethodCall", False, ["references.Reference"], []),
    ("references.IdentifierReference", False, ["references.Reference"], []),
    ("statements.Statement", True, [], []),
    ("statements.ExpressionStatement", False, ["statements.Statement"], []),
    ("statements.Block", False, ["statements.Statement", "statements.StatementListContainer"], []),
    ("statements.Condition", False, ["statements.Statement"], []),
    ("statements.WhileLoop", False, ["statements.Statement"], []),
    ("statements.Switch", False, ["statements.Statement"], []),
    ("statements.Case", False, ["statements.StatementListContainer"], []),
    ("statements.TryBlock", False, ["statements.Statement", "statements.StatementListContainer"], []),
    ("statements.CatchBlock", False, ["statements.StatementListContainer"], []),
]

# (name, from, to, to_role, kind, to_multiplicity)
EDGE_CLASSES = [
    ("classifiers.Extends", "classifiers.Class", "types.NamespaceClassifierReference", "extends", "containment", "0..1"),
    ("types.ClassifierReferences", "types.NamespaceClassifierReference", "types.ClassifierReference",
     "classifierReferences", "containment", "1..*"),
    ("types.ClassifierTarget", "types.ClassifierReference", "classifiers.Classifier", "target", "plain", "1..1"),
    ("modifiers.AnnotationsAndModifiers", "modifiers.AnnotableAndModifiable", "modifiers.Modifier",
     "annotationsAndModifiers", "containment", "0..*"),
    ("classifiers.Members", "classifiers.Classifier", "members.Member", "members", "containment", "0..*"),
    ("classifiers.Constants", "classifiers.Enumeration", "members.EnumConstant", "constants", "containment", "0..*"),
    ("members.Parameters", "members.Method", "parameters.OrdinaryParameter", "parameters", "containment", "0..*"),
    ("types.TypedElementType", "types.TypedElement", "types.TypeReference", "typeReference", "containment", "0..1"),
    ("statements.Statements", "statements.StatementListContainer", "statements.Statement",
     "statements", "containment", "0..*"),
    ("statements.Expression", "statements.ExpressionStatement", "references.Reference", "expression",
     "containment", "1..1"),
    ("references.Next", "references.Reference", "references.Reference", "next", "containment", "0..1"),
    ("references.Arguments", "references.MethodCall", "references.Reference", "arguments", "containment", "0..*"),
    ("references.MethodCallTarget", "references.MethodCall", "members.Method", "target", "plain", "1..1"),
    ("references.IdentifierTarget", "references.IdentifierReference", "references.ReferenceableElement",
     "target", "plain", "1..1"),
    ("statements.IfCondition", "statements.Condition", "references.Reference", "condition", "containment", "1..1"),
    ("statements.IfStatement", "statements.Condition", "statements.Statement", "statement", "containment", "1..1"),
    ("statements.LoopCondition", "statements.WhileLoop", "references.Reference", "condition", "containment", "1..1"),
    ("statements.LoopStatement", "statements.WhileLoop", "statements.Statement", "statement", "containment", "1..1"),
    ("statements.SwitchVariable", "statements.Switch", "references.Reference", "variable", "containment", "1..1"),
    ("statements.Cases", "statements.Switch", "statements.Case", "cases", "containment", "0..*"),
    ("statements.CaseCondition", "statements.Case", "references.Reference", "condition", "containment", "1..1"),
    ("statements.CatchBlocks", "statements.TryBlock", "statements.CatchBlock", "catchBlocks", "containment", "0..*"),
    ("statements.CatchParameter", "statements.CatchBlock", "parameters.OrdinaryParameter", "parameter",
     "containment", "1..1"),
]


def schema_doc():
    return {
        "name": "MiniJava",
        "packages": PACKAGES,
        "vertex_classes": [
            {"name": n, "abstract": a, "superclasses": s,
             "attributes": [{"name": an, "domain": d} for an, d in attrs]}
            for n, a, s, attrs in VERTEX_CLASSES
        ],
        "edge_classes": [
            {"name": n, "from": f, "to": t, "to_role": r, "kind": k,
             "from_multiplicity": "0..*", "to_multiplicity": m}
            for n, f, t, r, k, m in EDGE_CLASSES
        ],
    }


class Program:
    """Builds a syntax graph in the shape of a Java parser's output."""

    def __init__(self):
        self.vertices = []
        self.edges = []
        self.counter = 0
        self.classes = {}
        self.methods = {}
        self.constants = {}

    def fresh(self, prefix):
        self.counter += 1
        return f"{prefix}{self.counter}"

    def v(self, cls, vid=None, **attrs):
        vid = vid or self.fresh("n")
        self.vertices.append({"id": vid, "class": cls, "attributes": attrs})
        return vid

    def e(self, cls, frm, to):
        self.edges.append({"id": self.fresh("e"), "class": cls, "from": frm, "to": to})

    def modifier(self, owner, kind):
        self.e("modifiers.AnnotationsAndModifiers", owner, self.v(f"modifiers.{kind}"))

    def type_ref(self, owner, classifier):
        ns = self.v("types.NamespaceClassifierReference")
        cr = self.v("types.ClassifierReference")
        self.e("types.ClassifierReferences", ns, cr)
        self.e("types.ClassifierTarget", cr, self.classes[classifier])
        return ns

    def klass(self, name, extends=None, modifiers=()):
        c = self.v("classifiers.Class", name, name=name)
        self.classes[name] = c
        for m in modifiers:
            self.modifier(c, m)
        if extends:
            self.e("classifiers.Extends", c, self.type_ref(c, extends))
        return c

    def enum(self, name, constants):
        en = self.v("classifiers.Enumeration", name, name=name)
        self.classes[name] = en
        for k in constants:
            kid = self.v("members.EnumConstant", f"{name}.{k}", name=k)
            self.constants[k] = kid
            self.e("classifiers.Constants", en, kid)
        return en

    def method(self, cls, name, static=False, returns=None):
        m = self.v("members.Method", f"{cls}.{name}", name=name)
        self.methods[(cls, name)] = m
        self.e("classifiers.Members", self.classes[cls], m)
        if static:
            self.modifier(m, "Static")
        if returns:
            self.e("types.TypedElementType", m, self.type_ref(m, returns))
        return m

    def field(self, cls, name, type_name):
        f = self.v("members.Field", f"{cls}.{name}", name=name)
        self.e("classifiers.Members", self.classes[cls], f)
        self.e("types.TypedElementType", f, self.type_ref(f, type_name))
        return f

    def parameter(self, method, name, type_name):
        p = self.v("parameters.OrdinaryParameter", name=name)
        self.e("members.Parameters", method, p)
        self.e("types.TypedElementType", p, self.type_ref(p, type_name))
        return p

    # References

    def ident(self, target):
        r = self.v("references.IdentifierReference")
        self.e("references.IdentifierTarget", r, target)
        return r

    def call(self, method, args=()):
        c = self.v("references.MethodCall")
        self.e("references.MethodCallTarget", c, method)
        for a in args:
            self.e("references.Arguments", c, a)
        return c

    def chain(self, *refs):
        for a, b in zip(refs, refs[1:]):
            self.e("references.Next", a, b)
        return refs[0]

    def constant_arg(self, enum, constant):
        """`Enum.CONSTANT` as an argument: the enum reference, then the constant via next."""
        return self.chain(self.ident(self.classes[enum]), self.ident(self.constants[constant]))

    # Statements

    def stmt(self, container, statement):
        self.e("statements.Statements", container, statement)
        return statement

    def expr_stmt(self, container, expression):
        s = self.v("statements.ExpressionStatement")
        self.e("statements.Expression", s, expression)
        return self.stmt(container, s)

    def activate(self, container, state):
        """`State.Instance().activate();`"""
        return self.expr_stmt(container, self.chain(
            self.ident(self.classes[state]),
            self.call(self.methods[(state, "Instance")]),
            self.call(self.methods[("State", "activate")]),
        ))

    def send(self, container, constant):
        """`send(Event.CONSTANT);`"""
        return self.expr_stmt(container, self.call(
            self.methods[("State", "send")], [self.constant_arg("Event", constant)]))

    def block(self, container):
        return self.stmt(container, self.v("statements.Block"))

    def condition(self, container, test_target):
        """`if (test) { ... }`; returns the then-block."""
        c = self.stmt(container, self.v("statements.Condition"))
        self.e("statements.IfCondition", c, self.ident(test_target))
        b = self.v("statements.Block")
        self.e("statements.IfStatement", c, b)
        return b

    def while_loop(self, container, test_target):
        w = self.stmt(container, self.v("statements.WhileLoop"))
        self.e("statements.LoopCondition", w, self.ident(test_target))
        b = self.v("statements.Block")
        self.e("statements.LoopStatement", w, b)
        return b

    def switch(self, container, variable_target, constants):
        """`switch (v) { case K: ... }`; returns the case containers by constant."""
        s = self.stmt(container, self.v("statements.Switch"))
        self.e("statements.SwitchVariable", s, self.ident(variable_target))
        cases = {}
        for k in constants:
            c = self.v("statements.Case")
            self.e("statements.Cases", s, c)
            self.e("statements.CaseCondition", c, self.ident(self.constants[k]))
            cases[k] = c
        return cases

    def try_catch(self, container, exception, parameter):
        """`try { ... } catch (Exception p) { ... }`; returns (try, catch)."""
        t = self.stmt(container, self.v("statements.TryBlock"))
        c = self.v("statements.CatchBlock")
        self.e("statements.CatchBlocks", t, c)
        p = self.v("parameters.OrdinaryParameter", name=parameter)
        self.e("statements.CatchParameter", c, p)
        self.e("types.TypedElementType", p, self.type_ref(p, exception))
        return t, c

    def state_base(self, events):
        """The abstract `State` class with activate(), send(Event) and toString()."""
        self.enum("Event", events)
        self.klass("State", modifiers=["Abstract", "Public"])
        self.method("State", "activate")
        send = self.method("State", "send")
        self.parameter(send, "e", "Event")
        self.method("State", "toString")
        self.field("State", "event", "Event")

    def state(self, name, extends="State", modifiers=()):
        self.klass(name, extends=extends, modifiers=modifiers)
        self.method(name, "Instance", static=True, returns=name)

    def doc(self):
        return {"schema": schema_doc(), "graph": {"vertices": self.vertices, "edges": self.edges}}


def fixture_a():
    """Turnstile.

    abstract class State { void activate(); void send(Event e); Event event; }
    class Locked extends State {
      void coin() { send(Event.UNLOCK); Unlocked.Instance().activate(); }
      void run() {
        try { send(Event.LOCK); }
        catch (Exception ex) { Locked.Instance().activate(); }
      }
    }
    class Unlocked extends State {
      void run() {
        switch (event) {
          case PUSH: Locked.Instance().activate();
          case COIN: Unlocked.Instance().activate();
        }
      }
    }
    """
    p = Program()
    p.state_base(["COIN", "PUSH", "UNLOCK", "LOCK"])
    p.klass("Exception")
    p.state("Locked")
    p.state("Unlocked")
    coin = p.method("Locked", "coin")
    p.send(coin, "UNLOCK")
    p.activate(coin, "Unlocked")
    run = p.method("Locked", "run")
    body, catch = p.try_catch(run, "Exception", "ex")
    p.send(body, "LOCK")
    p.activate(catch, "Locked")
    run = p.method("Unlocked", "run")
    cases = p.switch(run, "State.event", ["PUSH", "COIN"])
    p.activate(cases["PUSH"], "Locked")
    p.activate(cases["COIN"], "Unlocked")
    return p


def fixture_b():
    """Indirect subclassing.

    abstract class State { ... }
    abstract class Active extends State {}
    class Idle extends State {
      void start() { Running.Instance().activate(); }
      void run() { if (ready) { send(Event.BOOT); Running.Instance().activate(); } }
    }
    public class Running extends Active {
      void stop() { Idle.Instance().toString(); Paused.Instance().activate(); }
    }
    class Paused extends Active {
      void run() { while (ready) { switch (event) { case RESUME: Running.Instance().activate(); } } }
    }
    class Turbo extends Running {}
    class Main { void main() { Idle.Instance().activate(); } }
    """
    p = Program()
    p.state_base(["BOOT", "RESUME", "HALT"])
    p.klass("Active", extends="State", modifiers=["Abstract"])
    p.state("Idle")
    p.state("Running", extends="Active", modifiers=["Public"])
    p.state("Paused", extends="Active")
    p.state("Turbo", extends="Running")
    p.klass("Main")
    ready = p.field("Idle", "ready", "Event")
    start = p.method("Idle", "start")
    p.activate(start, "Running")
    run = p.method("Idle", "run")
    then = p.condition(run, ready)
    p.send(then, "BOOT")
    p.activate(then, "Running")
    stop = p.method("Running", "stop")
    p.expr_stmt(stop, p.chain(
        p.ident(p.classes["Idle"]),
        p.call(p.methods[("Idle", "Instance")]),
        p.call(p.methods[("State", "toString")]),
    ))
    p.activate(stop, "Paused")
    run = p.method("Paused", "run")
    loop = p.while_loop(run, ready)
    cases = p.switch(loop, "State.event", ["RESUME"])
    p.activate(cases["RESUME"], "Running")
    main = p.method("Main", "main")
    p.activate(main, "Idle")
    return p


def fixture_c():
    """States without transitions.

    abstract class State { ... }
    class Open extends State { void run() { send(Event.PING); } }
    class Closed extends State { void close() { Open.Instance().toString(); } }
    """
    p = Program()
    p.state_base(["PING"])
    p.state("Open")
    p.state("Closed")
    run = p.method("Open", "run")
    p.send(run, "PING")
    close = p.method("Closed", "close")
    p.expr_stmt(close, p.chain(
        p.ident(p.classes["Open"]),
        p.call(p.methods[("Open", "Instance")]),
        p.call(p.methods[("State", "toString")]),
    ))
    return p


def fixture_duplicate_state():
    """Two unrelated classes named State; the binding must fail."""
    p = fixture_c()
    p.v("classifiers.Class", "OtherState", name="State")
    return p


# Hand-traced expectations. `case` names the trigger rule that applies:
# method (not run), switch, catch, or default.
MANIFESTS = {
    "A": {
        "states": ["Locked", "Unlocked"],
        "transitions": [
            {"src": "Locked", "dst": "Unlocked", "method": "coin", "trigger": "coin",
             "action": "UNLOCK", "case": "method"},
            {"src": "Locked", "dst": "Locked", "method": "run", "trigger": "Exception",
             "action": "--", "case": "catch"},
            {"src": "Unlocked", "dst": "Locked", "method": "run", "trigger": "PUSH",
             "action": "--", "case": "switch"},
            {"src": "Unlocked", "dst": "Unlocked", "method": "run", "trigger": "COIN",
             "action": "--", "case": "switch"},
        ],
    },
    "B": {
        "states": ["Idle", "Paused", "Running", "Turbo"],
        "transitions": [
            {"src": "Idle", "dst": "Running", "method": "start", "trigger": "start",
             "action": "--", "case": "method"},
            {"src": "Idle", "dst": "Running", "method": "run", "trigger": "--",
             "action": "BOOT", "case": "default"},
            {"src": "Running", "dst": "Paused", "method": "stop", "trigger": "stop",
             "action": "--", "case": "method"},
            {"src": "Paused", "dst": "Running", "method": "run", "trigger": "RESUME",
             "action": "--", "case": "switch"},
        ],
    },
    "C": {"states": ["Closed", "Open"], "transitions": []},
}


def target_schema():
    return {
        "name": "Target",
        "packages": [],
        "vertex_classes": [
            {"name": "State", "abstract": False, "superclasses": [],
             "attributes": [{"name": "name", "domain": "String"}]},
        ],
        "edge_classes": [
            {"name": "Transition", "abstract": False, "superclasses": [], "from": "State", "to": "State",
             "from_role": "src", "to_role": "dst", "kind": "plain",
             "from_multiplicity": "0..*", "to_multiplicity": "0..*",
             "attributes": [{"name": "trigger", "domain": "String", "default": "--"},
                            {"name": "action", "domain": "String", "default": "--"}]},
        ],
    }


def golden(manifest):
    ids = {s: f"s{i + 1}" for i, s in enumerate(manifest["states"])}
    vertices = [{"id": ids[s], "class": "State", "attributes": {"name": s}} for s in manifest["states"]]
    edges = [{"id": f"t{i + 1}", "class": "Transition", "from": ids[t["src"]], "to": ids[t["dst"]],
              "attributes": {"trigger": t["trigger"], "action": t["action"]}}
             for i, t in enumerate(manifest["transitions"])]
    return {"schema": target_schema(), "graph": {"vertices": vertices, "edges": edges}}


def write(name, doc):
    (HERE / name).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def main():
    programs = {"A": fixture_a(), "B": fixture_b(), "C": fixture_c()}
    for fid, program in programs.items():
        doc = program.doc()
        write(f"{fid}.graph.json", doc)
        write(f"{fid}.golden.json", golden(MANIFESTS[fid]))
        manifest = dict(MANIFESTS[fid])
        manifest.update({
            "id": fid,
            "source": f"{fid}.graph.json",
            "golden": f"{fid}.golden.json",
            "vertex_count": len(doc["graph"]["vertices"]),
            "edge_count": len(doc["graph"]["edges"]),
        })
        write(f"{fid}.manifest.json", manifest)
    write("duplicate_state.graph.json", fixture_duplicate_state().doc())


if __name__ == "__main__":
    main()
