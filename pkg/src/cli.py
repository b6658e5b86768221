"""CLI interface for groundkit."""
from __future__ import annotations

import asyncio
import logging
import shutil
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
load_dotenv()

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .cmdlang import (
    KitchenState,
    execute,
    format_command,
    load_inventory,
    load_verbs,
    parse_command,
    parse_program,
    run_program,
    validate_program,
)
from .config import FIXTURES, ClientMode, ConfirmationPolicy, RunConfig, load_config
from .errors import GroundkitError, ProgramError, UnknownIdError, VerificationRejected
from .evaluation import emit_report, load_gold, run_variants, score
from .graph import build_graph
from .grounding import brute_oracle, format_query, parse_query, resolve
from .knowledge import (
    Assertion,
    FactStore,
    Provenance,
    VerdictKind,
    commit_fact,
    verify_suggestion,
    with_store_facts,
)
from .llm import (
    CompletionClient,
    GroundingAnswer,
    LiveClient,
    ReplayClient,
    StorageSuggestion,
    build_grounding_prompt,
    build_simplify_prompt,
    build_storage_prompt,
    complete,
    extract_recipe_steps,
    get_variant,
    parse_grounding_response,
    parse_simplify_response,
    parse_storage_response,
)
from .world import SceneModel, anonymize, deanonymize, load_scene

app = typer.Typer(
    name="groundkit",
    help="Ground referring expressions and kitchen commands against a labelled scene",
    add_completion=False,
)
console = Console(force_terminal=True)
logger = logging.getLogger(__name__)

EXIT_USAGE = 64


@dataclass
class _Context:
    config: RunConfig
    verbose: bool = False


@app.callback()
def main(
    ctx: typer.Context,
    config: Optional[Path] = typer.Option(None, "--config", "-c", help="Config YAML file"),
    scene: Optional[Path] = typer.Option(None, "--scene", help="Scene JSON file"),
    replay: Optional[Path] = typer.Option(
        None, "--replay", help="Answer prompts from this recorded transcript"
    ),
    live: bool = typer.Option(False, "--live", help="Call the configured chat endpoint"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output directory"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
):
    """Global options shared by every command."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )
    overrides: dict = {"scene": scene, "out_dir": out}
    if live:
        overrides["mode"] = ClientMode.LIVE
    elif replay:
        overrides["mode"] = ClientMode.REPLAY
    if replay:
        overrides["transcript"] = replay
    with _guard():
        ctx.obj = _Context(config=load_config(config, **overrides), verbose=verbose)


@contextmanager
def _guard():
    """Report toolkit errors in the console and exit with their code."""
    try:
        yield
    except GroundkitError as e:
        console.print(f"[red]Error:[/red] {e}")
        hint = getattr(e, "hint", None)
        if hint:
            console.print(f"[dim]Hint:[/dim] {hint}")
        raise typer.Exit(e.exit_code)


def _client(cfg: RunConfig) -> CompletionClient:
    if cfg.mode is ClientMode.LIVE:
        return LiveClient(cfg.llm, transcript=cfg.out_dir / "live.transcript")
    return ReplayClient(cfg.transcript)


async def _with_client(cfg: RunConfig, work):
    client = _client(cfg)
    try:
        return await work(client)
    finally:
        await client.aclose()


def _scene(cfg: RunConfig, path: Path | None = None) -> SceneModel:
    return load_scene(path or cfg.scene)


def _open_journal(cfg: RunConfig, seed: Path | None = None, reseed: bool = False) -> FactStore:
    """Open out_dir/facts.jsonl, seeding it only when missing or when asked to."""
    journal = cfg.out_dir / "facts.jsonl"
    seed = seed or cfg.storage.seed_facts
    if (reseed or not journal.exists()) and seed.exists():
        if seed.resolve() != journal.resolve():
            journal.parent.mkdir(parents=True, exist_ok=True)
            shutil.copyfile(seed, journal)
            logger.info("seeded %s from %s", journal, seed)
    return FactStore.open(journal)


@app.command()
def ground(
    ctx: typer.Context,
    dsl: Optional[str] = typer.Option(None, "--dsl", help="Constraint query, (select ...)"),
    llm: bool = typer.Option(False, "--llm", help="Ask the LLM instead of resolving a query"),
    variant: str = typer.Option("A", "--variant", help="Prompt variant A-H for --llm"),
    re_texts: Optional[list[str]] = typer.Option(
        None, "--re", help="Referring expression for --llm (repeatable; default: gold set)"
    ),
    viewpoint: Optional[str] = typer.Option(None, "--viewpoint", help="Viewpoint name"),
    check: bool = typer.Option(False, "--check", help="Cross-check with exhaustive search"),
):
    """Resolve a constraint query, or ground expressions through the LLM."""
    cfg: RunConfig = ctx.obj.config
    if bool(dsl) == llm:
        console.print("[red]Error:[/red] give exactly one of --dsl or --llm")
        raise typer.Exit(EXIT_USAGE)

    with _guard():
        scene = _scene(cfg)
        if dsl:
            _ground_dsl(scene, dsl, viewpoint or cfg.viewpoint, check, ctx.obj.verbose)
        else:
            res = list(re_texts or load_gold(cfg.gold).texts)
            _ground_llm(cfg, scene, variant, res)


def _ground_dsl(
    scene: SceneModel, dsl: str, viewpoint: str | None, check: bool, verbose: bool
) -> None:
    query = parse_query(dsl)
    graph = build_graph(scene, viewpoint)
    result = resolve(query, scene, graph)
    console.print(f"[bold]Query:[/bold] {format_query(query)}")
    console.print(f"[dim]Viewpoint:[/dim] {graph.viewpoint}")
    if verbose:
        for line in result.trace:
            console.print(f"[dim]{line}[/dim]")
    if check:
        oracle = brute_oracle(query, scene, viewpoint)
        if oracle.matches != result.matches:
            console.print(
                f"[red]Error:[/red] exhaustive search disagrees: {', '.join(oracle.matches)}"
            )
            raise typer.Exit(1)
        console.print("[green]OK[/green] exhaustive search agrees")
    if not result.resolved:
        console.print(f"[yellow]No match.[/yellow] [dim]Hint:[/dim] {result.hint}")
        raise typer.Exit(2)

    table = Table(title="\nMatches")
    table.add_column("Object", style="cyan")
    table.add_column("Best", style="green")
    for object_id in result.matches:
        table.add_row(object_id, "*" if object_id in result.best else "")
    console.print(table)
    if result.ambiguous:
        console.print(f"[yellow]Ambiguous:[/yellow] {', '.join(result.best)}")


def _ground_llm(cfg: RunConfig, scene: SceneModel, label: str, res: list[str]) -> None:
    v = get_variant(label)
    graph = build_graph(scene, cfg.viewpoint)
    prompt = build_grounding_prompt(scene, graph, v, res, cfg.example)
    with console.status(spinner="line", status=f"Grounding with variant {label}..."):
        text = asyncio.run(_with_client(cfg, lambda client: complete(prompt, client)))

    mapping: dict[str, str] = {}
    known = set(scene.ids)
    if v.anonymized:
        _, mapping = anonymize(scene)
        known = set(mapping.values())
    table = Table(title=f"\nVariant {label}")
    table.add_column("Referring expression")
    table.add_column("Objects", style="cyan")
    for entry in parse_grounding_response(text, known_ids=known):
        if isinstance(entry, GroundingAnswer):
            table.add_row(entry.re_text, ", ".join(deanonymize(entry.ids, mapping)))
        else:
            table.add_row(entry.line, "[yellow]unparsed[/yellow]")
    console.print(table)


@app.command(name="eval")
def evaluate(
    ctx: typer.Context,
    variants: Optional[str] = typer.Option(
        None, "--variants", help="Comma-separated variant labels (default: config)"
    ),
):
    """Run prompt variants over the gold set and write report.csv and summary.json."""
    cfg: RunConfig = ctx.obj.config
    with _guard():
        labels = [v.strip() for v in variants.split(",")] if variants else cfg.variants
        chosen = [get_variant(label) for label in labels]
        scene = _scene(cfg)
        gold = load_gold(cfg.gold)
        with console.status(spinner="line", status=f"Running {len(chosen)} variant(s)..."):
            results = asyncio.run(
                _with_client(
                    cfg, lambda client: run_variants(chosen, scene, client, gold, cfg.example)
                )
            )
        docs = emit_report(results, gold, cfg.out_dir)

    table = Table(title="\nGrounding accuracy")
    table.add_column("Variant", style="cyan")
    table.add_column("Hits", justify="right")
    table.add_column("Expected", justify="right")
    table.add_column("Status")
    deviations = 0
    for result in results:
        s = score(result, gold)
        expected = gold.expected_hits.get(result.label)
        ok = result.complete and (expected is None or expected == s.hits)
        deviations += not ok
        status = "[green]OK[/green]" if ok else f"[red]{result.error or 'deviates'}[/red]"
        table.add_row(
            result.label, f"{s.hits}/{s.total}", "-" if expected is None else str(expected), status
        )
    console.print(table)
    thr = docs.summary["threshold"]
    console.print(
        f"Misses at difficulty >= {thr['value']}: {thr['misses_at_or_above']} of {thr['misses']}"
    )
    console.print(f"[green]Saved:[/green] {docs.csv_path}, {docs.summary_path}")
    if deviations:
        raise typer.Exit(1)


@app.command()
def simplify(
    ctx: typer.Context,
    recipe: Path = typer.Option(
        FIXTURES / "scrambled_eggs.txt", "--recipe", help="Recipe text with a Steps: section"
    ),
    dish: str = typer.Option("scrambled eggs", "--dish", help="Dish name used in the prompt"),
):
    """Turn recipe steps into short commands and validate the program."""
    cfg: RunConfig = ctx.obj.config
    with _guard():
        if not recipe.exists():
            console.print(f"[red]Error:[/red] Recipe not found: {recipe}")
            raise typer.Exit(EXIT_USAGE)
        steps = extract_recipe_steps(recipe.read_text(encoding="utf-8"))
        prompt = build_simplify_prompt(load_verbs(), steps, dish)
        text = asyncio.run(_with_client(cfg, lambda client: complete(prompt, client)))
        commands = parse_simplify_response(text)
        inventory = load_inventory(cfg.kitchen.inventory)
        report = validate_program(commands, _scene(cfg), inventory)

    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    program = cfg.out_dir / "program.cmds"
    program.write_text("".join(format_command(c) + "\n" for c in commands), encoding="utf-8")
    console.print(f"[bold]Commands:[/bold] {len(commands)}")
    for issue in report.errors:
        console.print(f"  [red]error[/red] {issue}")
    for issue in report.warnings:
        console.print(f"  [yellow]warning[/yellow] {issue}")
    console.print(f"[green]Saved to:[/green] {program}")
    if not report.ok:
        raise typer.Exit(1)


@app.command()
def store(
    ctx: typer.Context,
    facts: Optional[Path] = typer.Option(
        None, "--facts", help="Seed fact journal (default: storage.seed_facts)"
    ),
    reseed: bool = typer.Option(
        False, "--reseed", help="Overwrite the fact journal with the seed first"
    ),
    assume_yes: bool = typer.Option(False, "--assume-yes", help="Confirm every open question"),
    assume_no: bool = typer.Option(False, "--assume-no", help="Decline every open question"),
    provisional: Optional[bool] = typer.Option(
        None, "--provisional/--no-provisional", help="Accept unconfirmed LLM facts"
    ),
):
    """Ask where things are stored and check the answers against known facts."""
    cfg: RunConfig = ctx.obj.config
    if assume_yes and assume_no:
        console.print("[red]Error:[/red] --assume-yes and --assume-no exclude each other")
        raise typer.Exit(EXIT_USAGE)
    policy = cfg.confirmation
    if assume_yes:
        policy = ConfirmationPolicy.ASSUME_YES
    elif assume_no:
        policy = ConfirmationPolicy.ASSUME_NO
    provisional = cfg.provisional if provisional is None else provisional

    with _guard():
        scene = load_scene(cfg.storage.scene)
        fact_store = _open_journal(cfg, facts, reseed)

        prompt = build_storage_prompt(scene, cfg.storage.type_classes, cfg.storage.requests)
        text = asyncio.run(_with_client(cfg, lambda client: complete(prompt, client)))
        entries = parse_storage_response(text)

    table = Table(title="\nStorage suggestions")
    table.add_column("Request")
    table.add_column("Objects", style="cyan")
    table.add_column("Locations", style="cyan")
    table.add_column("Verdict")
    rejected = 0
    for entry in entries:
        if not isinstance(entry, StorageSuggestion):
            table.add_row(entry.line, "", "", "[yellow]unparsed[/yellow]")
            continue
        try:
            verdict = verify_suggestion(entry, fact_store, scene, provisional)
        except UnknownIdError as e:
            table.add_row(entry.re_text, "", "", f"[red]{e}[/red]")
            continue
        label = verdict.kind.value
        if verdict.kind is VerdictKind.REJECT:
            rejected += 1
            label = f"[red]reject[/red] {verdict.reason}"
        elif verdict.kind is VerdictKind.NEEDS_CONFIRMATION:
            confirmed = _confirm(
                f"Store {', '.join(entry.objects)} ({entry.re_text}) in {_short(entry.locations)}?",
                policy,
            )
            with _guard():
                commit_fact(fact_store, entry, confirmation=confirmed, scene=scene)
            label = "[green]confirmed[/green]" if confirmed else "[yellow]unconfirmed[/yellow]"
        else:
            label = f"[green]accept[/green] {verdict.reason}"
        table.add_row(
            entry.re_text, ", ".join(entry.objects), _short(entry.locations), label
        )
    console.print(table)
    console.print(f"[green]Fact journal:[/green] {cfg.out_dir / 'facts.jsonl'}")
    if rejected and policy is not ConfirmationPolicy.ASK:
        with _guard():
            raise VerificationRejected(f"{rejected} suggestion(s) conflict with confirmed facts")


def _short(ids: tuple[str, ...], limit: int = 4) -> str:
    return ", ".join(ids) if len(ids) <= limit else f"{', '.join(ids[:limit])}, ... ({len(ids)})"


def _confirm(question: str, policy: ConfirmationPolicy) -> bool:
    if policy is ConfirmationPolicy.ASSUME_YES:
        return True
    if policy is ConfirmationPolicy.ASSUME_NO:
        return False
    return typer.confirm(question)


@app.command(name="exec")
def exec_program(
    ctx: typer.Context,
    program: Path = typer.Option(
        FIXTURES / "scrambled.cmds", "--program", help="Command program, one per line"
    ),
    inventory: Optional[Path] = typer.Option(None, "--inventory", help="Kitchen inventory YAML"),
    skip_optional: bool = typer.Option(
        False, "--skip-optional", help="Skip lines marked (Optional)"
    ),
):
    """Run a command program in the simulated kitchen."""
    cfg: RunConfig = ctx.obj.config
    with _guard():
        if not program.exists():
            console.print(f"[red]Error:[/red] Program not found: {program}")
            raise typer.Exit(EXIT_USAGE)
        commands = parse_program(program.read_text(encoding="utf-8"))
        kitchen = load_inventory(inventory or cfg.kitchen.inventory)
        state = KitchenState.initial(kitchen, cfg.kitchen)
        try:
            final, log = run_program(commands, state, skip_optional=skip_optional)
        except ProgramError as e:
            for step in e.log:
                console.print(f"[dim]{step}[/dim]")
            console.print(f"[red]Error:[/red] line {e.index}: {e.cause}")
            raise typer.Exit(e.exit_code)

    for step in log:
        console.print(str(step))
    console.print(f"\n[bold]Executed:[/bold] {len(log)} steps, t={final.clock}")
    for line in final.summary():
        console.print(f"  {line}")


@app.command()
def repl(ctx: typer.Context):
    """Interactive session: (select ...) queries, :cmd <command>, :fact <id> <key> <value>.

    Facts go to the same journal as `store`. Replacing a confirmed value asks
    according to the confirmation policy.
    """
    cfg: RunConfig = ctx.obj.config
    with _guard():
        scene = _scene(cfg)
        graph = build_graph(scene, cfg.viewpoint)
        state = KitchenState.initial(load_inventory(cfg.kitchen.inventory), cfg.kitchen)
        fact_store = _open_journal(cfg)
    console.print("[dim]Type :quit to leave.[/dim]")

    while True:
        try:
            line = console.input("[bold]> [/bold]").strip()
        except EOFError:
            break
        if not line:
            continue
        if line in (":quit", ":q"):
            break
        try:
            if line.startswith("("):
                current = with_store_facts(scene, fact_store)
                result = resolve(parse_query(line), current, graph)
                if result.resolved:
                    console.print(", ".join(result.matches))
                else:
                    console.print(f"[yellow]No match.[/yellow] {result.hint}")
            elif line.startswith(":cmd "):
                state = execute(parse_command(line[5:]), state)
                console.print(f"[dim]t={state.clock}[/dim] " + "; ".join(state.summary()))
            elif line.startswith(":fact "):
                parts = line.split(maxsplit=3)
                if len(parts) != 4:
                    console.print("[red]Error:[/red] usage :fact <object> <key> <value>")
                    continue
                _, object_id, key, value = parts
                scene.get(object_id)
                known = fact_store.confirmed(object_id, key)
                if known is not None and known.value != value and not _confirm(
                    f"Replace {known.cite()} with {value}?", cfg.confirmation
                ):
                    console.print(f"[yellow]Kept[/yellow] {known.cite()}")
                    continue
                for old in fact_store.facts_for(object_id, key):
                    fact_store.supersede(old.seq)
                fact_store.add(
                    Assertion(
                        object_id=object_id,
                        key=key,
                        value=value,
                        provenance=Provenance.HUMAN,
                        confirmed=True,
                    )
                )
                console.print(f"[green]OK[/green] {object_id} {key}={value}")
            else:
                console.print("[red]Error:[/red] unknown input")
        except GroundkitError as e:
            console.print(f"[red]Error:[/red] {e}")


if __name__ == "__main__":
    app()
