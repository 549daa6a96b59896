public class RequirementFilterController {
    public void saveRequirement(Requirement requirement) {
        requirementStore.save(requirement);
    }
    public void addRequirement(Requirement requirement) {
        requirementStore.add(requirement);
    }
    public void exportFilter(Filter filter) {
        filterStore.export(filter);
    }
}
