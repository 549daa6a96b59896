public class SimilarityRequirementHelper
{
    public void ScheduleRequirement(Requirement requirement)
    {
        _requirementStore.Schedule(requirement);
    }
    public void FindRequirement(Requirement requirement)
    {
        _requirementStore.Find(requirement);
    }
    public void SearchRequirement(Requirement requirement)
    {
        _requirementStore.Search(requirement);
    }
}
