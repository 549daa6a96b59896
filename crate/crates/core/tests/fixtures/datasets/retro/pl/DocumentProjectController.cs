public class DocumentProjectController
{
    public void ApproveDocument(Document document)
    {
        _documentStore.Approve(document);
    }
    public void UpdateProject(Project project)
    {
        _projectStore.Update(project);
    }
}
